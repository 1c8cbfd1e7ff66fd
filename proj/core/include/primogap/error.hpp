#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace primogap {

enum class Errc {
  invalid_argument,
  non_coprime_moduli,
  duplicate_modulus,
  not_a_covering,
  not_restricted,
  even_modulus_present,
  no_even_class,
  even_length,
  invalid_pair,
  construction_failed,
  odd_gap,
  period_too_large,
  gap_in_report_sequence,
  budget_exceeded,
  parse_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace primogap
