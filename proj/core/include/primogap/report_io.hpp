#pragma once

// Text renderings of difference reports and the JSON witness file.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "primogap/analyzer.hpp"
#include "primogap/covering.hpp"

namespace primogap {

enum class OutputFormat { table, csv, json };

std::optional<OutputFormat> parse_format(std::string_view name);

/// "k | p_k | h(k-1) | N_min(k) | non-existent differences | h(k)" rows;
/// empty cells are rendered as "-".
std::string render_table_row(const DifferenceReport& r);
std::string render_table(const std::vector<DifferenceReport>& reports);

/// Header k,p_k,h_prev,n_min,missing,h; missing is ';'-joined inside its field.
std::string to_csv(const std::vector<DifferenceReport>& reports);
std::vector<DifferenceReport> from_csv(std::string_view text);

/// JSON array of report objects (elapsed stored as integer microseconds).
std::string to_json(const std::vector<DifferenceReport>& reports);
std::vector<DifferenceReport> from_json(std::string_view text);

std::string render(const std::vector<DifferenceReport>& reports, OutputFormat format);

inline constexpr std::string_view kWitnessFileVersion = "primogap-witness/1";

enum class WitnessForm { odd_prime, full };

struct WitnessRecord {
  std::size_t k = 0;
  std::size_t m = 0;
  WitnessForm form = WitnessForm::odd_prime;
  Covering covering;
};

struct WitnessFile {
  std::string version{kWitnessFileVersion};
  std::vector<WitnessRecord> records;
};

std::string write_witness_file(const WitnessFile& file);
/// Throws Error(parse_error) on malformed input or an unknown version.
WitnessFile parse_witness_file(std::string_view text);

/// Re-checks one record: restricted covering of the right window over the
/// right primes, and a derived coprime pair with gap m. Returns the failure
/// reason, or nullopt when the record verifies.
std::optional<std::string> verify_record(const WitnessRecord& record);

/// Records for every cached witness at the cache's level.
std::vector<WitnessRecord> records_from_cache(const WitnessCache& cache);

}  // namespace primogap
