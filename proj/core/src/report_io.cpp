#include "primogap/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "primogap/error.hpp"

namespace primogap {

using nlohmann::json;

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::size_t>& values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::size_t parse_size(std::string_view field, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw Error(Errc::parse_error, "bad " + std::string(what) + " field '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  for (;;) {
    std::size_t pos = text.find(sep, begin);
    out.push_back(text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin));
    if (pos == std::string_view::npos) return out;
    begin = pos + 1;
  }
}

}  // namespace

std::string render_table_row(const DifferenceReport& r) {
  std::ostringstream os;
  os << r.k << " | " << r.p_k << " | " << (r.h_prev ? std::to_string(*r.h_prev) : "-") << " | " << r.n_min << " | "
     << (r.missing.empty() ? "-" : join(r.missing, ", ")) << " | " << r.h;
  return os.str();
}

std::string render_table(const std::vector<DifferenceReport>& reports) {
  std::string out = "k | p_k | h(k-1) | N_min(k) | non-existent differences | h(k)\n";
  for (const auto& r : reports) out += render_table_row(r) + "\n";
  return out;
}

std::string to_csv(const std::vector<DifferenceReport>& reports) {
  std::string out = "k,p_k,h_prev,n_min,missing,h\n";
  for (const auto& r : reports) {
    out += std::to_string(r.k) + "," + std::to_string(r.p_k) + "," + (r.h_prev ? std::to_string(*r.h_prev) : "") +
           "," + std::to_string(r.n_min) + "," + join(r.missing, ";") + "," + std::to_string(r.h) + "\n";
  }
  return out;
}

std::vector<DifferenceReport> from_csv(std::string_view text) {
  std::vector<DifferenceReport> out;
  auto lines = split(text, '\n');
  if (lines.empty() || lines[0] != "k,p_k,h_prev,n_min,missing,h") {
    throw Error(Errc::parse_error, "missing CSV header");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split(lines[i], ',');
    if (f.size() != 6) throw Error(Errc::parse_error, "CSV row " + std::to_string(i) + " needs 6 fields");
    DifferenceReport r;
    r.k = parse_size(f[0], "k");
    r.p_k = static_cast<Prime>(parse_size(f[1], "p_k"));
    if (!f[2].empty()) r.h_prev = parse_size(f[2], "h_prev");
    r.n_min = parse_size(f[3], "n_min");
    if (!f[4].empty()) {
      for (auto m : split(f[4], ';')) r.missing.push_back(parse_size(m, "missing"));
    }
    r.h = parse_size(f[5], "h");
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json(const std::vector<DifferenceReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"k", r.k},
                   {"p_k", r.p_k},
                   {"h_prev", r.h_prev ? json(*r.h_prev) : json(nullptr)},
                   {"n_min", r.n_min},
                   {"missing", r.missing},
                   {"h", r.h},
                   {"elapsed_us", r.elapsed.count()}});
  }
  return arr.dump(2) + "\n";
}

std::vector<DifferenceReport> from_json(std::string_view text) {
  std::vector<DifferenceReport> out;
  try {
    json arr = json::parse(text);
    for (const auto& o : arr) {
      DifferenceReport r;
      r.k = o.at("k").get<std::size_t>();
      r.p_k = o.at("p_k").get<Prime>();
      if (!o.at("h_prev").is_null()) r.h_prev = o.at("h_prev").get<std::size_t>();
      r.n_min = o.at("n_min").get<std::size_t>();
      r.missing = o.at("missing").get<std::vector<std::size_t>>();
      r.h = o.at("h").get<std::size_t>();
      r.elapsed = std::chrono::microseconds(o.value("elapsed_us", std::int64_t{0}));
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  return out;
}

std::string render(const std::vector<DifferenceReport>& reports, OutputFormat format) {
  switch (format) {
    case OutputFormat::table: return render_table(reports);
    case OutputFormat::csv: return to_csv(reports);
    case OutputFormat::json: return to_json(reports);
  }
  return {};
}

namespace {

json start_to_json(const BigInt& start) {
  if (start >= std::numeric_limits<std::int64_t>::min() && start <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(start);
  }
  return start.str();
}

BigInt start_from_json(const json& v) {
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) return BigInt(v.get<std::string>());
  throw Error(Errc::parse_error, "window_start must be an integer or a decimal string");
}

}  // namespace

std::string write_witness_file(const WitnessFile& file) {
  json records = json::array();
  for (const auto& rec : file.records) {
    json classes = json::array();
    for (const auto& c : rec.covering.classes) classes.push_back({c.prime, c.residue});
    records.push_back({{"k", rec.k},
                       {"m", rec.m},
                       {"form", rec.form == WitnessForm::odd_prime ? "odd-prime" : "full"},
                       {"window_start", start_to_json(rec.covering.window.start)},
                       {"window_length", rec.covering.window.length},
                       {"classes", classes}});
  }
  return json{{"version", file.version}, {"records", records}}.dump(1) + "\n";
}

WitnessFile parse_witness_file(std::string_view text) {
  WitnessFile file;
  try {
    json doc = json::parse(text);
    file.version = doc.at("version").get<std::string>();
    if (file.version != kWitnessFileVersion) {
      throw Error(Errc::parse_error, "unsupported witness file version '" + file.version + "'");
    }
    for (const auto& o : doc.at("records")) {
      WitnessRecord rec;
      rec.k = o.at("k").get<std::size_t>();
      rec.m = o.at("m").get<std::size_t>();
      const auto form = o.at("form").get<std::string>();
      if (form == "odd-prime") {
        rec.form = WitnessForm::odd_prime;
      } else if (form == "full") {
        rec.form = WitnessForm::full;
      } else {
        throw Error(Errc::parse_error, "unknown witness form '" + form + "'");
      }
      rec.covering.window.start = start_from_json(o.at("window_start"));
      rec.covering.window.length = o.at("window_length").get<std::size_t>();
      for (const auto& c : o.at("classes")) {
        if (!c.is_array() || c.size() != 2) throw Error(Errc::parse_error, "class entries are [p, a] pairs");
        rec.covering.classes.push_back({c[0].get<Prime>(), c[1].get<std::uint32_t>()});
      }
      file.records.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
  return file;
}

std::optional<std::string> verify_record(const WitnessRecord& rec) {
  try {
    if (rec.k < 1 || rec.m < 2 || rec.m % 2 != 0) return "k must be >= 1 and m a positive even number";
    const PrimeSet primes = primes_upto_index(rec.k);
    const Covering& cov = rec.covering;
    const std::size_t expected_length = rec.form == WitnessForm::odd_prime ? rec.m / 2 - 1 : rec.m - 1;
    if (cov.window.start != 1 || cov.window.length != expected_length) {
      return "window is not <1>_" + std::to_string(expected_length);
    }
    std::vector<Prime> moduli;
    for (const auto& c : cov.classes) moduli.push_back(c.prime);
    std::sort(moduli.begin(), moduli.end());
    auto want = rec.form == WitnessForm::odd_prime ? primes.odd() : primes.all();
    if (!std::equal(moduli.begin(), moduli.end(), want.begin(), want.end())) {
      return "moduli are not the expected primes";
    }
    if (!is_restricted(cov)) return "not a restricted covering";
    if (rec.k == 1 && rec.form == WitnessForm::odd_prime) return std::nullopt;  // empty covering of <1>_0
    CoprimePair pair =
        rec.form == WitnessForm::odd_prime ? pair_from_odd_covering(cov, primes) : covering_to_coprime_pair(cov, primes);
    if (pair.gap() != rec.m) return "derived pair has gap " + pair.gap().str();
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

std::vector<WitnessRecord> records_from_cache(const WitnessCache& cache) {
  std::vector<WitnessRecord> out;
  for (const auto& [m, cov] : cache.witnesses()) out.push_back({cache.level(), m, WitnessForm::odd_prime, cov});
  return out;
}

}  // namespace primogap
