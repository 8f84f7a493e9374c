#ifndef GCORR_IO_HPP
#define GCORR_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gcorr/composition.hpp"
#include "gcorr/correspondence.hpp"
#include "gcorr/cstar.hpp"
#include "gcorr/error.hpp"
#include "gcorr/groupoid.hpp"
#include "gcorr/measures.hpp"
#include "gcorr/report.hpp"
#include "gcorr/scalar.hpp"

// JSON interchange.
//
// Instance (schema "gcorr-instance", version 1):
//
//   {
//     "schema": "gcorr-instance", "version": 1,
//     "groupoids": {
//       "<name>": {
//         "units":   ["u", ...],
//         "arrows":  [{"name": "a", "src": "u", "dst": "v", "inv": "a'"}, ...],
//         "compose": [["a", "b", "a∘b"], ...],          // a after b
//         "units_arrows": {"u": "e_u", ...},             // optional
//         "haar":    {"a": "1/2", ...}                   // optional, counting
//       }
//     },
//     "correspondences": [
//       {
//         "name": "X", "left": "<groupoid>", "right": "<groupoid>",
//         "points": ["x", ...],
//         "r": {"x": "u", ...}, "s": {"x": "v", ...},
//         "left_action":  [["a", "x", "a·x"], ...],
//         "right_action": [["x", "b", "x·b"], ...],
//         "lambda": {"x": "3/2", ...},
//         "adjoining": [["a", "x", "value"], ...]        // optional, derived
//       }
//     ]
//   }
//
// Weights are strings ("3", "2/7", "0.125", "1e-3") or integers, read
// exactly. A JSON number with a fraction or exponent is accepted as an
// inexact double and its path is recorded in Instance::inexact_fields.
//
// Cochain (schema "gcorr-cochain", version 1): {"b": {"(x,y)": "value"}}
// keyed by fibre-product point names.

namespace gcorr {

  using json = nlohmann::ordered_json;

  inline constexpr int instance_version = 1;

  struct NamedGroupoid {
    std::string name;
    HaarSystem  haar;
  };

  struct Instance {
    std::vector<NamedGroupoid>  groupoids;
    std::vector<Correspondence> correspondences;
    std::vector<std::string>    inexact_fields;

    NamedGroupoid const* find(std::string const& name) const {
      for (auto const& g : groupoids) {
        if (g.name == name) {
          return &g;
        }
      }
      return nullptr;
    }

    /// Name under which a correspondence's groupoid is registered.
    std::string name_of(FiniteGroupoid const& g) const {
      for (auto const& n : groupoids) {
        if (*n.haar.groupoid == g) {
          return n.name;
        }
      }
      return {};
    }
  };

  namespace detail {

    class Reader {
     public:
      std::vector<std::string>* inexact = nullptr;

      [[noreturn]] static void fail(std::string const& path, std::string const& msg,
                                    ErrorCode code = ErrorCode::parse) {
        throw Error(code, path + ": " + msg, path);
      }

      static json const& field(json const& j, std::string const& key, std::string const& path) {
        if (!j.is_object()) {
          fail(path, "expected an object");
        }
        auto it = j.find(key);
        if (it == j.end()) {
          fail(path, "missing field '" + key + "'");
        }
        return *it;
      }

      static std::string text(json const& j, std::string const& path) {
        if (!j.is_string()) {
          fail(path, "expected a string");
        }
        return j.get<std::string>();
      }

      static std::vector<std::string> names(json const& j, std::string const& path) {
        if (!j.is_array()) {
          fail(path, "expected an array of names");
        }
        std::vector<std::string> out;
        std::map<std::string, Index> seen;
        for (Index i = 0; i < j.size(); ++i) {
          std::string p = path + "[" + std::to_string(i) + "]";
          out.push_back(text(j[i], p));
          if (!seen.emplace(out.back(), i).second) {
            fail(p, "duplicate name '" + out.back() + "'");
          }
        }
        return out;
      }

      Scalar weight(json const& j, std::string const& path) const {
        if (j.is_string()) {
          try {
            return Scalar::parse(j.get<std::string>());
          } catch (Error const& e) {
            fail(path, e.message());
          }
        }
        if (j.is_number_integer()) {
          return Scalar(j.get<long long>());
        }
        if (j.is_number_float()) {
          if (inexact != nullptr) {
            inexact->push_back(path);
          }
          return Scalar::inexact(j.get<double>());
        }
        fail(path, "expected a weight (string or number)");
      }

      static Index lookup(std::map<std::string, Index> const& index, json const& j,
                          std::string const& path, char const* what) {
        std::string n = text(j, path);
        auto        it = index.find(n);
        if (it == index.end()) {
          fail(path, std::string("unknown ") + what + " '" + n + "'", ErrorCode::unknown_name);
        }
        return it->second;
      }

      static std::map<std::string, Index> index_of(std::vector<std::string> const& v) {
        std::map<std::string, Index> m;
        for (Index i = 0; i < v.size(); ++i) {
          m.emplace(v[i], i);
        }
        return m;
      }

      static std::array<json const*, 3> triple(json const& j, std::string const& path) {
        if (!j.is_array() || j.size() != 3) {
          fail(path, "expected a triple");
        }
        return {&j[0], &j[1], &j[2]};
      }
    };

    /// Re-raises a library error with the JSON path prepended.
    template <class F>
    auto at_path(std::string const& path, F&& f) -> decltype(f()) {
      try {
        return f();
      } catch (GroupoidError const&) {
        throw;
      } catch (Error const& e) {
        if (e.code() == ErrorCode::parse || e.code() == ErrorCode::unknown_name) {
          throw;
        }
        throw Error(e.code(), path + ": " + e.message(), e.witness());
      }
    }

    inline NamedGroupoid read_groupoid(Reader const& rd, std::string const& name, json const& j,
                                       std::string const& path, Tolerance tol) {
      GroupoidTables t;
      t.units         = Reader::names(Reader::field(j, "units", path), path + ".units");
      auto units      = Reader::index_of(t.units);
      json const& arr = Reader::field(j, "arrows", path);
      if (!arr.is_array()) {
        Reader::fail(path + ".arrows", "expected an array");
      }
      for (Index i = 0; i < arr.size(); ++i) {
        std::string p = path + ".arrows[" + std::to_string(i) + "]";
        t.arrows.push_back(Reader::text(Reader::field(arr[i], "name", p), p + ".name"));
      }
      auto arrows = Reader::index_of(t.arrows);
      if (arrows.size() != t.arrows.size()) {
        Reader::fail(path + ".arrows", "duplicate arrow name");
      }
      for (Index i = 0; i < arr.size(); ++i) {
        std::string p = path + ".arrows[" + std::to_string(i) + "]";
        t.src.push_back(Reader::lookup(units, Reader::field(arr[i], "src", p), p + ".src", "unit"));
        t.dst.push_back(Reader::lookup(units, Reader::field(arr[i], "dst", p), p + ".dst", "unit"));
        t.inv.push_back(
            Reader::lookup(arrows, Reader::field(arr[i], "inv", p), p + ".inv", "arrow"));
      }
      json const& comp = Reader::field(j, "compose", path);
      if (!comp.is_array()) {
        Reader::fail(path + ".compose", "expected an array");
      }
      for (Index i = 0; i < comp.size(); ++i) {
        std::string p  = path + ".compose[" + std::to_string(i) + "]";
        auto        tr = Reader::triple(comp[i], p);
        t.comp.push_back({Reader::lookup(arrows, *tr[0], p + "[0]", "arrow"),
                          Reader::lookup(arrows, *tr[1], p + "[1]", "arrow"),
                          Reader::lookup(arrows, *tr[2], p + "[2]", "arrow")});
      }
      if (auto it = j.find("units_arrows"); it != j.end()) {
        t.unit_arrow.assign(t.units.size(), npos);
        for (auto const& [u, a] : it->items()) {
          std::string p  = path + ".units_arrows." + u;
          auto        ui = units.find(u);
          if (ui == units.end()) {
            Reader::fail(p, "unknown unit '" + u + "'", ErrorCode::unknown_name);
          }
          t.unit_arrow[ui->second] = Reader::lookup(arrows, a, p, "arrow");
        }
        for (Index u = 0; u < t.units.size(); ++u) {
          if (t.unit_arrow[u] == npos) {
            Reader::fail(path + ".units_arrows", "no identity for unit '" + t.units[u] + "'");
          }
        }
      }
      GroupoidPtr g = share(build_groupoid(std::move(t)));
      HaarSystem  haar = HaarSystem::counting(g);
      if (auto it = j.find("haar"); it != j.end()) {
        auto covered = std::vector<bool>(g->num_arrows(), false);
        if (!it->is_object()) {
          Reader::fail(path + ".haar", "expected an object");
        }
        for (auto const& [a, w] : it->items()) {
          std::string p = path + ".haar." + a;
          Index       k = g->find_arrow(a);
          if (k == npos) {
            Reader::fail(p, "unknown arrow '" + a + "'", ErrorCode::unknown_name);
          }
          haar.weight[k] = rd.weight(w, p);
          covered[k]     = true;
          if (haar.weight[k].is_zero()) {
            Reader::fail(p, "Haar weight must be strictly positive", ErrorCode::zero_weight);
          }
          if (!haar.weight[k].is_positive()) {
            Reader::fail(p, "Haar weight must be strictly positive", ErrorCode::non_positive);
          }
        }
        for (Index k = 0; k < g->num_arrows(); ++k) {
          if (!covered[k]) {
            Reader::fail(path + ".haar", "no weight for arrow '" + g->arrow_name(k) + "'");
          }
        }
      }
      at_path(path + ".haar", [&] {
        require_haar(haar, tol);
        return 0;
      });
      return NamedGroupoid{name, std::move(haar)};
    }

    inline std::vector<Index> read_momentum(json const& j, std::vector<std::string> const& points,
                                            FiniteGroupoid const& g, std::string const& path) {
      if (!j.is_object()) {
        Reader::fail(path, "expected an object");
      }
      auto               units = Reader::index_of(g.unit_names());
      std::vector<Index> m;
      for (auto const& x : points) {
        auto it = j.find(x);
        if (it == j.end()) {
          Reader::fail(path, "no value for point '" + x + "'");
        }
        m.push_back(Reader::lookup(units, *it, path + "." + x, "unit"));
      }
      if (j.size() != points.size()) {
        Reader::fail(path, "entries for unknown points", ErrorCode::unknown_name);
      }
      return m;
    }

    inline Correspondence read_correspondence(Reader const& rd, Instance const& inst,
                                              json const& j, std::string const& path,
                                              Tolerance tol) {
      std::string name = j.contains("name") ? Reader::text(j["name"], path + ".name") : "X";
      auto        side = [&](char const* key) {
        std::string n = Reader::text(Reader::field(j, key, path), path + "." + key);
        auto const* g = inst.find(n);
        if (g == nullptr) {
          Reader::fail(path + "." + key, "unknown groupoid '" + n + "'", ErrorCode::unknown_name);
        }
        return g->haar;
      };
      HaarSystem left  = side("left");
      HaarSystem right = side("right");
      auto       points = Reader::names(Reader::field(j, "points", path), path + ".points");
      auto       pidx   = Reader::index_of(points);
      auto       r = read_momentum(Reader::field(j, "r", path), points, left.g(), path + ".r");
      auto       s = read_momentum(Reader::field(j, "s", path), points, right.g(), path + ".s");

      auto read_table = [&](char const* key, Side sd, GroupoidPtr const& g) {
        auto         arrows = Reader::index_of(g->arrow_names());
        ActionTables t{sd, points, sd == Side::left ? r : s, {}};
        json const&  tab = Reader::field(j, key, path);
        if (!tab.is_array()) {
          Reader::fail(path + "." + key, "expected an array");
        }
        for (Index i = 0; i < tab.size(); ++i) {
          std::string p  = path + "." + key + "[" + std::to_string(i) + "]";
          auto        tr = Reader::triple(tab[i], p);
          Index       a, x;
          if (sd == Side::left) {
            a = Reader::lookup(arrows, *tr[0], p + "[0]", "arrow");
            x = Reader::lookup(pidx, *tr[1], p + "[1]", "point");
          } else {
            x = Reader::lookup(pidx, *tr[0], p + "[0]", "point");
            a = Reader::lookup(arrows, *tr[1], p + "[1]", "arrow");
          }
          t.table.push_back({a, x, Reader::lookup(pidx, *tr[2], p + "[2]", "point")});
        }
        return at_path(path + "." + key, [&] { return build_action(g, std::move(t)); });
      };
      GroupoidAction la    = read_table("left_action", Side::left, left.groupoid);
      GroupoidAction ra    = read_table("right_action", Side::right, right.groupoid);
      Bispace        space = at_path(path, [&] { return make_bispace(la, ra); });

      json const&         lam = Reader::field(j, "lambda", path);
      std::vector<Scalar> w;
      if (!lam.is_object()) {
        Reader::fail(path + ".lambda", "expected an object");
      }
      for (auto const& x : points) {
        auto it = lam.find(x);
        if (it == lam.end()) {
          Reader::fail(path + ".lambda", "no weight for point '" + x + "'");
        }
        w.push_back(rd.weight(*it, path + ".lambda." + x));
      }
      if (lam.size() != points.size()) {
        Reader::fail(path + ".lambda", "entries for unknown points", ErrorCode::unknown_name);
      }
      MeasureFamily fam = at_path(path + ".lambda", [&] {
        return MeasureFamily(s, right.g().num_units(), std::move(w), &points);
      });

      std::optional<std::vector<Scalar>> adj;
      if (auto it = j.find("adjoining"); it != j.end()) {
        TransformationGroupoid gx = transformation_groupoid(space.left);
        auto                   arrows = Reader::index_of(left.g().arrow_names());
        std::vector<Scalar>    v(gx.base_arrow.size());
        std::vector<bool>      seen(v.size(), false);
        if (!it->is_array()) {
          Reader::fail(path + ".adjoining", "expected an array");
        }
        for (Index i = 0; i < it->size(); ++i) {
          std::string p  = path + ".adjoining[" + std::to_string(i) + "]";
          auto        tr = Reader::triple((*it)[i], p);
          Index       a  = Reader::lookup(arrows, *tr[0], p + "[0]", "arrow");
          Index       x  = Reader::lookup(pidx, *tr[1], p + "[1]", "point");
          if (left.g().src(a) != r[x]) {
            Reader::fail(p, "arrow does not act on point", ErrorCode::bad_action);
          }
          Index k = gx.arrow(a, x);
          v[k]    = rd.weight(*tr[2], p + "[2]");
          seen[k] = true;
        }
        for (Index k = 0; k < v.size(); ++k) {
          if (!seen[k]) {
            Reader::fail(path + ".adjoining",
                         "no value for " + gx.groupoid->arrow_name(k));
          }
        }
        adj = std::move(v);
      }
      return at_path(path, [&] {
        return make_correspondence(name, left, right, std::move(space), std::move(fam),
                                   std::move(adj), tol);
      });
    }

    inline void check_schema(json const& j, std::string const& schema) {
      if (!j.is_object()) {
        Reader::fail("$", "expected an object");
      }
      auto s = Reader::text(Reader::field(j, "schema", "$"), "$.schema");
      if (s != schema) {
        Reader::fail("$.schema", "expected '" + schema + "', got '" + s + "'");
      }
      auto const& v = Reader::field(j, "version", "$");
      if (!v.is_number_integer() || v.get<int>() != instance_version) {
        Reader::fail("$.version", "unsupported version " + v.dump());
      }
    }

    inline json scalar_json(Scalar const& s) {
      if (s.is_exact()) {
        return s.to_string();
      }
      return s.to_double();
    }

  }  // namespace detail

  inline json parse_json_text(std::string const& text, std::string const& origin = "input") {
    try {
      return json::parse(text);
    } catch (json::parse_error const& e) {
      // nlohmann reports "line L, column C" inside what().
      throw Error(ErrorCode::parse, origin + ": " + e.what());
    }
  }

  inline json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw Error(ErrorCode::parse, "cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
  }

  /// Parses and validates an instance. Structural and axiom problems throw
  /// with their own error code and the JSON path in the message.
  inline Instance parse_instance(json const& j, Tolerance tol = {}) {
    detail::check_schema(j, "gcorr-instance");
    Instance       inst;
    detail::Reader rd;
    rd.inexact = &inst.inexact_fields;
    auto const& gs = detail::Reader::field(j, "groupoids", "$");
    if (!gs.is_object()) {
      detail::Reader::fail("$.groupoids", "expected an object");
    }
    for (auto const& [name, g] : gs.items()) {
      inst.groupoids.push_back(
          detail::read_groupoid(rd, name, g, "$.groupoids." + name, tol));
    }
    auto const& cs = detail::Reader::field(j, "correspondences", "$");
    if (!cs.is_array()) {
      detail::Reader::fail("$.correspondences", "expected an array");
    }
    for (Index i = 0; i < cs.size(); ++i) {
      inst.correspondences.push_back(detail::read_correspondence(
          rd, inst, cs[i], "$.correspondences[" + std::to_string(i) + "]", tol));
    }
    return inst;
  }

  inline json groupoid_json(HaarSystem const& haar) {
    auto const& g = haar.g();
    json        j;
    j["units"]   = g.unit_names();
    json arrows  = json::array();
    for (Index a = 0; a < g.num_arrows(); ++a) {
      arrows.push_back({{"name", g.arrow_name(a)},
                        {"src", g.unit_name(g.src(a))},
                        {"dst", g.unit_name(g.dst(a))},
                        {"inv", g.arrow_name(g.inv(a))}});
    }
    j["arrows"] = std::move(arrows);
    json comp   = json::array();
    for (Index a = 0; a < g.num_arrows(); ++a) {
      for (Index b : g.range_fibre(g.src(a))) {
        comp.push_back({g.arrow_name(a), g.arrow_name(b), g.arrow_name(g.compose(a, b))});
      }
    }
    j["compose"] = std::move(comp);
    json ids     = json::object();
    for (Index u = 0; u < g.num_units(); ++u) {
      ids[g.unit_name(u)] = g.arrow_name(g.unit_arrow(u));
    }
    j["units_arrows"] = std::move(ids);
    json h            = json::object();
    for (Index a = 0; a < g.num_arrows(); ++a) {
      h[g.arrow_name(a)] = detail::scalar_json(haar(a));
    }
    j["haar"] = std::move(h);
    return j;
  }

  inline json correspondence_json(Correspondence const& c, std::string const& left,
                                  std::string const& right) {
    auto const& X = c.space;
    json        j;
    j["name"]   = c.name;
    j["left"]   = left;
    j["right"]  = right;
    j["points"] = X.point_names();
    json r = json::object(), s = json::object(), lam = json::object();
    for (Index x = 0; x < X.num_points(); ++x) {
      r[X.point_name(x)]   = c.G().unit_name(X.r(x));
      s[X.point_name(x)]   = c.H().unit_name(X.s(x));
      lam[X.point_name(x)] = detail::scalar_json(c.lambda.weight(x));
    }
    j["r"] = std::move(r);
    j["s"] = std::move(s);
    json la = json::array(), ra = json::array(), adj = json::array();
    for (Index x = 0; x < X.num_points(); ++x) {
      for (Index a : X.left.acting_arrows(x)) {
        la.push_back({c.G().arrow_name(a), X.point_name(x), X.point_name(X.left.act(a, x))});
        adj.push_back({c.G().arrow_name(a), X.point_name(x), detail::scalar_json(c.delta(a, x))});
      }
      for (Index b : X.right.acting_arrows(x)) {
        ra.push_back({X.point_name(x), c.H().arrow_name(b), X.point_name(X.right.act(b, x))});
      }
    }
    j["left_action"]  = std::move(la);
    j["right_action"] = std::move(ra);
    j["lambda"]       = std::move(lam);
    j["adjoining"]    = std::move(adj);
    return j;
  }

  /// Builds an instance around correspondences, registering each distinct
  /// groupoid once. `names` suggests groupoid names in order of first use;
  /// a clash between different groupoids gets a numeric suffix.
  inline Instance make_instance(std::vector<Correspondence> cs,
                                std::vector<std::string> const& names = {}) {
    Instance inst;
    Index    next = 0;
    auto     add  = [&](HaarSystem const& h) {
      for (auto const& g : inst.groupoids) {
        if (g.haar == h) {
          return;
        }
      }
      std::string base = next < names.size() ? names[next] : "G" + std::to_string(next + 1);
      ++next;
      std::string n = base;
      for (int k = 2; inst.find(n) != nullptr; ++k) {
        n = base + "_" + std::to_string(k);
      }
      inst.groupoids.push_back({n, h});
    };
    for (auto const& c : cs) {
      add(c.left);
      add(c.right);
    }
    inst.correspondences = std::move(cs);
    return inst;
  }

  inline std::string groupoid_name(Instance const& inst, HaarSystem const& h) {
    for (auto const& g : inst.groupoids) {
      if (g.haar == h) {
        return g.name;
      }
    }
    throw Error(ErrorCode::unknown_name, "groupoid is not registered in the instance");
  }

  inline json instance_json(Instance const& inst) {
    json j;
    j["schema"]  = "gcorr-instance";
    j["version"] = instance_version;
    json gs      = json::object();
    for (auto const& g : inst.groupoids) {
      gs[g.name] = groupoid_json(g.haar);
    }
    j["groupoids"] = std::move(gs);
    json cs        = json::array();
    for (auto const& c : inst.correspondences) {
      cs.push_back(correspondence_json(c, groupoid_name(inst, c.left), groupoid_name(inst, c.right)));
    }
    j["correspondences"] = std::move(cs);
    return j;
  }

  /// Serialised text; byte-identical for equal instances.
  inline std::string dump_instance(Instance const& inst) {
    return instance_json(inst).dump(2) + "\n";
  }

  /// Reads {"b": {z-name: value}} against fibre-product point names.
  inline std::vector<Scalar> parse_cochain(json const& j, std::vector<std::string> const& z_names,
                                           std::vector<std::string>* inexact = nullptr) {
    detail::check_schema(j, "gcorr-cochain");
    detail::Reader rd;
    rd.inexact     = inexact;
    auto const& b  = detail::Reader::field(j, "b", "$");
    if (!b.is_object()) {
      detail::Reader::fail("$.b", "expected an object");
    }
    std::vector<Scalar> out;
    for (auto const& z : z_names) {
      auto it = b.find(z);
      if (it == b.end()) {
        detail::Reader::fail("$.b", "no value for point '" + z + "'");
      }
      out.push_back(rd.weight(*it, "$.b." + z));
    }
    if (b.size() != z_names.size()) {
      detail::Reader::fail("$.b", "entries for unknown points", ErrorCode::unknown_name);
    }
    return out;
  }

  inline json cochain_json(std::vector<std::string> const& z_names, std::vector<Scalar> const& b) {
    json j;
    j["schema"]  = "gcorr-cochain";
    j["version"] = instance_version;
    json v       = json::object();
    for (Index k = 0; k < z_names.size(); ++k) {
      v[z_names[k]] = detail::scalar_json(b[k]);
    }
    j["b"] = std::move(v);
    return j;
  }

  inline json report_json(Report const& r) {
    json checks = json::array();
    for (auto const& c : r.checks()) {
      json e;
      e["name"]     = c.name;
      e["passed"]   = c.passed;
      e["residual"] = c.residual;
      if (!c.witness.empty()) {
        e["witness"] = c.witness;
      }
      if (!c.detail.empty()) {
        e["detail"] = c.detail;
      }
      checks.push_back(std::move(e));
    }
    json j;
    j["ok"]     = r.ok();
    j["checks"] = std::move(checks);
    j["notes"]  = r.notes();
    return j;
  }

  inline json gram_json(GramReport const& g) {
    json j;
    j["basis_pairs"]       = g.basis_pairs;
    j["random_pairs"]      = g.random_pairs;
    j["isometry_basis"]    = g.isometry_basis;
    j["isometry_random"]   = g.isometry_random;
    j["isometry_by_arrow"] = g.isometry_by_arrow;
    j["intertwining"]      = g.intertwining;
    j["right_module"]      = g.right_module;
    j["rank"]              = g.rank;
    j["omega_dim"]         = g.omega_dim;
    j["positivity_min"]    = g.positivity_min;
    j["report"]            = report_json(g.report);
    return j;
  }

  /// Envelope around a report for command output.
  inline json result_json(std::string const& command, int exit_code, Report const& r) {
    json j;
    j["schema"]    = "gcorr-report";
    j["version"]   = instance_version;
    j["command"]   = command;
    j["exit_code"] = exit_code;
    j.update(report_json(r));
    return j;
  }

}  // namespace gcorr

#endif  // GCORR_IO_HPP
