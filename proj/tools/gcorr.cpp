// gcorr: validate, compose and verify finite groupoid correspondences.
//
// Exit codes: 0 ok, 1 parse or validation failure, 2 composition failure,
// 3 theorem breach.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcorr/gcorr.hpp"

namespace {

  using namespace gcorr;

  enum Exit : int { ok = 0, invalid = 1, composition = 2, breach = 3 };

  struct Options {
    double                   tol     = -1.0;  // negative: library defaults
    bool                     as_json = false;
    std::vector<std::string> files;
    std::string              out;
    std::string              cochain_file;
    Index                    trials  = 200;
    std::uint64_t            seed    = 1;
    unsigned                 threads = 1;
    std::string              name;
    std::string              sizes;
  };

  Tolerance tolerance(Options const& o, Tolerance fallback) {
    return o.tol < 0 ? fallback : Tolerance{o.tol, o.tol};
  }

  void write_text(std::string const& path, std::string const& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      throw Error(ErrorCode::parse, "cannot write " + path);
    }
    f << text;
  }

  /// Prints a report (human or JSON) and returns `code`.
  int finish(Options const& o, std::string const& command, int code, Report const& r,
             json extra = json::object()) {
    if (o.as_json) {
      json j = result_json(command, code, r);
      for (auto& [k, v] : extra.items()) {
        j[k] = v;
      }
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << r.render();
      std::cout << command << ": " << (code == Exit::ok ? "ok" : "FAILED") << " (exit " << code
                << ")\n";
    }
    return code;
  }

  int fail_with(Options const& o, std::string const& command, int code, Error const& e,
                std::string stage = {}) {
    Report r;
    Check  c{stage.empty() ? "input" : "stage." + stage, false, 0.0, e.witness(),
            std::string(to_string(e.code())) + ": " + e.message()};
    r.add(c);
    json extra = json::object();
    extra["error"] = {{"code", to_string(e.code())}, {"message", e.message()}};
    if (!stage.empty()) {
      extra["error"]["stage"] = stage;
    }
    return finish(o, command, code, r, extra);
  }

  Instance load(std::string const& path, Tolerance tol) {
    return parse_instance(read_json_file(path), tol);
  }

  struct Loaded {
    Instance                 a, b;
    Correspondence const*    X = nullptr;
    Correspondence const*    Y = nullptr;
    std::vector<std::string> notes;
  };

  Loaded load_pair(Options const& o, Tolerance tol) {
    Loaded L;
    L.a = load(o.files.at(0), tol);
    if (o.files.size() >= 2) {
      L.b = load(o.files[1], tol);
      if (L.a.correspondences.empty() || L.b.correspondences.empty()) {
        throw Error(ErrorCode::mismatch, "each file needs a correspondence");
      }
      L.X = &L.a.correspondences[0];
      L.Y = &L.b.correspondences[0];
    } else {
      if (L.a.correspondences.size() < 2) {
        throw Error(ErrorCode::mismatch, "a single file needs two correspondences");
      }
      L.X = &L.a.correspondences[0];
      L.Y = &L.a.correspondences[1];
    }
    for (auto const* inst : {&L.a, &L.b}) {
      for (auto const& p : inst->inexact_fields) {
        L.notes.push_back("inexact weight at " + p);
      }
    }
    return L;
  }

  /// Validation reports of every correspondence involved, prefixed by name.
  Report validate_all(std::vector<Correspondence const*> const& cs, Tolerance tol) {
    Report r;
    for (auto const* c : cs) {
      r.append(validate(*c, tol), c->name);
    }
    return r;
  }

  std::optional<std::vector<Scalar>> read_cochain(Options const& o, Correspondence const& X,
                                                  Correspondence const& Y, Report& r) {
    if (o.cochain_file.empty()) {
      return std::nullopt;
    }
    FibreProduct             z = fibre_product(X.space.right, Y.space.left);
    std::vector<std::string> inexact;
    auto b = parse_cochain(read_json_file(o.cochain_file), z.diagonal.point_names(), &inexact);
    for (auto const& p : inexact) {
      r.note("inexact cochain value at " + p);
    }
    return b;
  }

  int cmd_validate(Options const& o) {
    Tolerance tol = tolerance(o, {});
    Instance  inst;
    try {
      inst = load(o.files.at(0), tol);
    } catch (Error const& e) {
      return fail_with(o, "validate", Exit::invalid, e);
    }
    std::vector<Correspondence const*> cs;
    for (auto const& c : inst.correspondences) {
      cs.push_back(&c);
    }
    Report r = validate_all(cs, tol);
    for (auto const& p : inst.inexact_fields) {
      r.note("inexact weight at " + p);
    }
    return finish(o, "validate", r.ok() ? Exit::ok : Exit::invalid, r);
  }

  /// Shared front half of compose and verify; returns an exit code on
  /// failure.
  struct Composed {
    Loaded            in;
    CompositionResult R;
    Report            report;
  };

  std::optional<int> run_compose(Options const& o, std::string const& command, Composed& C) {
    Tolerance tol = tolerance(o, {});
    try {
      C.in = load_pair(o, tol);
    } catch (Error const& e) {
      return fail_with(o, command, Exit::invalid, e);
    }
    for (auto const& n : C.in.notes) {
      C.report.note(n);
    }
    Report v = validate_all({C.in.X, C.in.Y}, tol);
    C.report.append(v, "input");
    if (!v.ok()) {
      return finish(o, command, Exit::invalid, C.report);
    }
    CompositionOptions co;
    co.tol = tol;
    try {
      co.b_override = read_cochain(o, *C.in.X, *C.in.Y, C.report);
    } catch (Error const& e) {
      return fail_with(o, command,
                       e.code() == ErrorCode::groupoid_mismatch ? Exit::composition
                                                                : Exit::invalid,
                       e, e.code() == ErrorCode::groupoid_mismatch ? "match" : "");
    }
    try {
      C.R = compose(*C.in.X, *C.in.Y, co);
    } catch (StageError const& e) {
      return fail_with(o, command, Exit::composition, e, e.stage());
    } catch (Error const& e) {
      return fail_with(o, command, Exit::composition, e, "compose");
    }
    C.report.append(C.R.report, "compose");
    return std::nullopt;
  }

  Instance composite_instance(Composed const& C) {
    std::string g1 = groupoid_name(C.in.a, C.in.X->left);
    std::string g3 = groupoid_name(C.in.b.groupoids.empty() ? C.in.a : C.in.b, C.in.Y->right);
    return make_instance({C.R.composite}, {g1, g3});
  }

  int cmd_compose(Options const& o) {
    Composed C;
    if (auto code = run_compose(o, "compose", C)) {
      return *code;
    }
    Instance    out  = composite_instance(C);
    std::string text = dump_instance(out);
    try {
      if (!o.out.empty()) {
        write_text(o.out, text);
      }
    } catch (Error const& e) {
      return fail_with(o, "compose", Exit::invalid, e);
    }
    json extra = json::object();
    extra["exact"] = C.R.exact();
    if (o.as_json) {
      extra["instance"] = instance_json(out);
    }
    C.report.note(std::string("composite is ") + (C.R.exact() ? "exact" : "inexact")
                  + ", |Z| = " + std::to_string(C.R.Z.pairs.size())
                  + ", |Omega| = " + std::to_string(C.R.orbits.num_orbits()));
    return finish(o, "compose", Exit::ok, C.report, extra);
  }

  int cmd_verify(Options const& o) {
    Composed C;
    if (auto code = run_compose(o, "verify", C)) {
      return *code;
    }
    VerifyOptions vo;
    vo.tol     = tolerance(o, vo.tol);
    vo.trials  = o.trials;
    vo.seed    = o.seed;
    vo.threads = std::max(1u, o.threads);
    GramReport G;
    try {
      G = verify_theorem(*C.in.X, *C.in.Y, C.R, vo);
    } catch (Error const& e) {
      return fail_with(o, "verify", Exit::breach, e, "verify");
    }
    C.report.append(G.report, "verify");
    json extra     = json::object();
    extra["gram"]  = gram_json(G);
    return finish(o, "verify", G.ok() ? Exit::ok : Exit::breach, C.report, extra);
  }

  int emit(Options const& o, std::string const& command, Instance const& inst) {
    std::string text = dump_instance(inst);
    if (o.out.empty()) {
      std::cout << text;
      return Exit::ok;
    }
    try {
      write_text(o.out, text);
    } catch (Error const& e) {
      return fail_with(o, command, Exit::invalid, e);
    }
    return Exit::ok;
  }

  int cmd_example(Options const& o) {
    try {
      CatalogEntry e = catalog_entry(o.name);
      return emit(o, "example", make_instance({e.X, e.Y}, {"G1", "G2", "G3"}));
    } catch (Error const& e) {
      return fail_with(o, "example", Exit::invalid, e);
    }
  }

  int cmd_random(Options const& o) {
    RandomSizes sizes;
    if (!o.sizes.empty()) {
      std::vector<Index> v;
      std::stringstream  ss(o.sizes);
      std::string        part;
      while (std::getline(ss, part, ',')) {
        try {
          v.push_back(static_cast<Index>(std::stoul(part)));
        } catch (std::exception const&) {
          v.clear();
          break;
        }
      }
      if (v.size() != 3 || v[0] == 0 || v[1] == 0 || v[2] == 0) {
        return fail_with(o, "random", Exit::invalid,
                         Error(ErrorCode::parse, "--sizes expects X,Y,G2 as positive integers"));
      }
      sizes = RandomSizes{v[0], v[1], v[2]};
    }
    try {
      RandomPair p = random_pair(o.seed, sizes);
      return emit(o, "random", make_instance({p.X, p.Y}, {"G1", "G2", "G3"}));
    } catch (Error const& e) {
      return fail_with(o, "random", Exit::invalid, e);
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite groupoid correspondences: validate, compose, verify."};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "absolute and relative tolerance");
    c->add_flag("--json", o.as_json, "machine-readable report on stdout");
  };
  auto pair_args = [&](CLI::App* c) {
    c->add_option("files", o.files, "instance file(s): one file with two correspondences, or two files")
        ->required()
        ->expected(1, 2)
        ->check(CLI::ExistingFile);
    c->add_option("--cochain-file", o.cochain_file, "replace the canonical cochain b")
        ->check(CLI::ExistingFile);
  };

  auto* validate_cmd = app.add_subcommand("validate", "check every axiom of each correspondence");
  validate_cmd->add_option("file", o.files, "instance file")->required()->expected(1)->check(
      CLI::ExistingFile);
  common(validate_cmd);

  auto* compose_cmd = app.add_subcommand("compose", "compose X with Y");
  pair_args(compose_cmd);
  compose_cmd->add_option("--out", o.out, "write the composite instance here");
  common(compose_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "compose, then test the Hilbert module isomorphism");
  pair_args(verify_cmd);
  verify_cmd->add_option("--trials", o.trials, "random vector pairs")->default_val(200);
  verify_cmd->add_option("--seed", o.seed, "seed for random vectors")->default_val(1);
  verify_cmd->add_option("--threads", o.threads, "worker threads for the basis sweep")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  common(verify_cmd);

  auto* example_cmd = app.add_subcommand("example", "write a catalog instance");
  example_cmd->add_option("name", o.name, "fn-compose | group-hom | subgroup | induction-finite | quiver")
      ->required();
  example_cmd->add_option("--out", o.out, "output file (default stdout)");
  common(example_cmd);

  auto* random_cmd = app.add_subcommand("random", "write a seeded random composable pair");
  random_cmd->add_option("--seed", o.seed, "generator seed")->default_val(1);
  random_cmd->add_option("--sizes", o.sizes, "max |X|,|Y|,|G2 arrows| (default 40,40,24)");
  random_cmd->add_option("--out", o.out, "output file (default stdout)");
  common(random_cmd);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return Exit::invalid;
  }

  if (*validate_cmd) {
    return cmd_validate(o);
  }
  if (*compose_cmd) {
    return cmd_compose(o);
  }
  if (*verify_cmd) {
    return cmd_verify(o);
  }
  if (*example_cmd) {
    return cmd_example(o);
  }
  return cmd_random(o);
}
