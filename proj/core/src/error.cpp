#include "primogap/error.hpp"

namespace primogap {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::non_coprime_moduli: return "NonCoprimeModuli";
    case Errc::duplicate_modulus: return "DuplicateModulus";
    case Errc::not_a_covering: return "NotACovering";
    case Errc::not_restricted: return "NotRestricted";
    case Errc::even_modulus_present: return "EvenModulusPresent";
    case Errc::no_even_class: return "NoEvenClass";
    case Errc::even_length: return "EvenLength";
    case Errc::invalid_pair: return "InvalidPair";
    case Errc::construction_failed: return "ConstructionFailed";
    case Errc::odd_gap: return "OddGap";
    case Errc::period_too_large: return "PeriodTooLarge";
    case Errc::gap_in_report_sequence: return "GapInReportSequence";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace primogap
