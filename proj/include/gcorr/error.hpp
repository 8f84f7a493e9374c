#ifndef GCORR_ERROR_HPP
#define GCORR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcorr {

  enum class ErrorCode {
    non_associative,
    bad_unit,
    bad_inverse,
    dangling_endpoint,
    bad_action,
    not_commuting,
    zero_weight,
    not_haar,
    bad_cutoff,
    not_a_cocycle,
    non_positive,
    not_invariant,
    not_well_defined,
    groupoid_mismatch,
    mismatch,
    not_a_homomorphism,
    not_a_subgroup,
    unknown_name,
    parse,
    stage
  };

  inline std::string_view to_string(ErrorCode code) {
    switch (code) {
      case ErrorCode::non_associative: return "NonAssociative";
      case ErrorCode::bad_unit: return "BadUnit";
      case ErrorCode::bad_inverse: return "BadInverse";
      case ErrorCode::dangling_endpoint: return "DanglingEndpoint";
      case ErrorCode::bad_action: return "BadAction";
      case ErrorCode::not_commuting: return "NotCommuting";
      case ErrorCode::zero_weight: return "ZeroWeight";
      case ErrorCode::not_haar: return "NotHaar";
      case ErrorCode::bad_cutoff: return "BadCutoff";
      case ErrorCode::not_a_cocycle: return "NotACocycle";
      case ErrorCode::non_positive: return "NonPositive";
      case ErrorCode::not_invariant: return "NotInvariant";
      case ErrorCode::not_well_defined: return "NotWellDefined";
      case ErrorCode::groupoid_mismatch: return "GroupoidMismatch";
      case ErrorCode::mismatch: return "Mismatch";
      case ErrorCode::not_a_homomorphism: return "NotAHomomorphism";
      case ErrorCode::not_a_subgroup: return "NotASubgroup";
      case ErrorCode::unknown_name: return "UnknownName";
      case ErrorCode::parse: return "ParseError";
      case ErrorCode::stage: return "StageError";
    }
    return "Error";
  }

  /// Base exception for every failure raised by the library.
  ///
  /// `witness()` names the offending arrows, points or stage, so that a
  /// caller can report *where* an axiom broke and not just that it did.
  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& message, std::string witness = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          message_(message),
          witness_(std::move(witness)) {}

    ErrorCode code() const noexcept {
      return code_;
    }

    std::string const& witness() const noexcept {
      return witness_;
    }

    /// what() without the leading code name.
    std::string const& message() const noexcept {
      return message_;
    }

   private:
    ErrorCode   code_;
    std::string message_;
    std::string witness_;
  };

}  // namespace gcorr

#endif  // GCORR_ERROR_HPP
