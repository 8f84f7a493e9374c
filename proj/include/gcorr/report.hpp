#ifndef GCORR_REPORT_HPP
#define GCORR_REPORT_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gcorr {

  /// One named check with its outcome. Failed checks always carry a witness.
  struct Check {
    std::string name;
    bool        passed   = true;
    double      residual = 0.0;
    std::string witness;
    std::string detail;
  };

  class Report {
   public:
    Report& add(Check check) {
      if (!check.passed && check.witness.empty()) {
        check.witness = "(unspecified)";
      }
      checks_.push_back(std::move(check));
      return *this;
    }

    Report& pass(std::string name, double residual = 0.0, std::string detail = {}) {
      return add(Check{std::move(name), true, residual, {}, std::move(detail)});
    }

    Report& fail(std::string name, std::string witness, double residual = 0.0,
                 std::string detail = {}) {
      return add(Check{std::move(name), false, residual, std::move(witness),
                       std::move(detail)});
    }

    Report& expect(bool ok, std::string name, double residual, std::string witness,
                   std::string detail = {}) {
      if (ok) {
        return pass(std::move(name), residual, std::move(detail));
      }
      return fail(std::move(name), std::move(witness), residual, std::move(detail));
    }

    Report& note(std::string text) {
      notes_.push_back(std::move(text));
      return *this;
    }

    /// Appends `other`, prefixing its check names with `prefix` + ".".
    Report& append(Report const& other, std::string_view prefix = {}) {
      for (Check c : other.checks_) {
        if (!prefix.empty()) {
          c.name = std::string(prefix) + "." + c.name;
        }
        checks_.push_back(std::move(c));
      }
      for (auto const& n : other.notes_) {
        notes_.push_back(n);
      }
      return *this;
    }

    bool ok() const {
      return std::all_of(checks_.begin(), checks_.end(),
                         [](Check const& c) { return c.passed; });
    }

    Check const* first_failure() const {
      auto it = std::find_if(checks_.begin(), checks_.end(),
                             [](Check const& c) { return !c.passed; });
      return it == checks_.end() ? nullptr : &*it;
    }

    Check const* find(std::string_view name) const {
      auto it = std::find_if(checks_.begin(), checks_.end(),
                             [&](Check const& c) { return c.name == name; });
      return it == checks_.end() ? nullptr : &*it;
    }

    std::vector<Check> const& checks() const {
      return checks_;
    }

    std::vector<std::string> const& notes() const {
      return notes_;
    }

    std::string render() const {
      std::ostringstream os;
      for (auto const& c : checks_) {
        os << (c.passed ? "[pass] " : "[FAIL] ") << c.name;
        os << "  residual=" << c.residual;
        if (!c.passed) {
          os << "  witness=" << c.witness;
        }
        if (!c.detail.empty()) {
          os << "  (" << c.detail << ")";
        }
        os << '\n';
      }
      for (auto const& n : notes_) {
        os << "note: " << n << '\n';
      }
      return os.str();
    }

   private:
    std::vector<Check>       checks_;
    std::vector<std::string> notes_;
  };

}  // namespace gcorr

#endif  // GCORR_REPORT_HPP
