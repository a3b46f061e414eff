#ifndef CDKN_IO_HPP
#define CDKN_IO_HPP

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <locale>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdkn/density.hpp"
#include "cdkn/functional.hpp"
#include "cdkn/localize.hpp"
#include "cdkn/transport1d.hpp"

// File formats: `t,h` density CSV on a uniform grid, `a:b,c:d` interval
// sets, JSON reports, and JSON disintegration manifests.

namespace cdkn::io {

using density::GridDensity;
using transport1d::IntervalSet;

struct CsvError : std::runtime_error {
  std::size_t line;
  CsvError(std::size_t line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

inline std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

// Reads a `t,h` CSV; rejects non-uniform grids (relative step deviation
// above 1e-9) and malformed rows, reporting the offending line.
inline GridDensity read_density_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw CsvError(1, "empty file");
  ++lineno;
  // tolerate whitespace and \r around the header
  std::string hdr;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) hdr += c;
  if (hdr != "t,h") throw CsvError(lineno, "expected header 't,h'");
  std::vector<double> ts, hs;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed;
    for (char c : line)
      if (c != '\r' && c != ' ' && c != '\t') trimmed += c;
    if (trimmed.empty()) continue;
    const auto comma = trimmed.find(',');
    if (comma == std::string::npos)
      throw CsvError(lineno, "expected 't,h' pair");
    try {
      std::size_t used0 = 0, used1 = 0;
      const double t = std::stod(trimmed.substr(0, comma), &used0);
      const std::string hv = trimmed.substr(comma + 1);
      const double h = std::stod(hv, &used1);
      if (used0 != comma || used1 != hv.size())
        throw CsvError(lineno, "trailing characters");
      ts.push_back(t);
      hs.push_back(h);
    } catch (const CsvError&) {
      throw;
    } catch (const std::exception&) {
      throw CsvError(lineno, "malformed number");
    }
  }
  if (ts.size() < 4) throw CsvError(lineno + 1, "need at least 4 rows");
  const double step = ts[1] - ts[0];
  if (!(step > 0.0)) throw CsvError(3, "t column must be increasing");
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double s = ts[i] - ts[i - 1];
    if (std::abs(s - step) > 1e-9 * std::max(std::abs(step), 1.0))
      throw CsvError(i + 2, "non-uniform grid step");
  }
  return GridDensity(ts.front(), step, std::move(hs));
}

inline GridDensity read_density_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_density_csv(f);
}

inline void write_density_csv(std::ostream& out, const GridDensity& h) {
  out << "t,h\n";
  for (std::size_t i = 0; i < h.size(); ++i)
    out << format_double(h.node(i)) << ',' << format_double(h.values[i])
        << '\n';
}

inline void write_density_csv(const std::string& path, const GridDensity& h) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write_density_csv(f, h);
}

// Nodal function CSV: `t,f`, same grid conventions as the density file.
inline std::vector<double> read_function_csv(const std::string& path,
                                             const GridDensity& grid) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(f, line);  // header
  std::vector<double> values;
  while (std::getline(f, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (values.size() != grid.size())
    throw std::runtime_error(path + ": node count mismatch");
  return values;
}

// IntervalSet text format `a1:b1,a2:b2,...`.
inline IntervalSet parse_interval_set(const std::string& text) {
  IntervalSet set;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("interval set: expected a:b in '" + item +
                                  "'");
    const double a = std::stod(item.substr(0, colon));
    const double b = std::stod(item.substr(colon + 1));
    if (!(b >= a))
      throw std::invalid_argument("interval set: b < a in '" + item + "'");
    set.parts.push_back({a, b});
  }
  if (set.parts.empty())
    throw std::invalid_argument("interval set: empty specification");
  set.normalize();
  return set;
}

inline std::string format_interval_set(const IntervalSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.parts.size(); ++i) {
    if (i) out += ',';
    out += format_double(set.parts[i].first) + ':' +
           format_double(set.parts[i].second);
  }
  return out;
}

inline nlohmann::json report_json(const functional::FunctionalReport& rep,
                                  const std::optional<std::string>&
                                      witness_csv_path = {}) {
  nlohmann::json j;
  j["constant_estimate"] = rep.constant_estimate;
  if (rep.reference) j["reference"] = *rep.reference;
  j["holds"] = rep.holds;
  j["slack"] = rep.slack;
  if (witness_csv_path) j["witness_csv_path"] = *witness_csv_path;
  return j;
}

// Disintegration manifest: {"fibers": [{weight, density_csv,
// function_csv}...], "singular": [{weight, value}...]}. Paths are taken
// relative to the current directory.
inline localize::Disintegration read_disintegration(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  f >> j;
  localize::Disintegration d;
  for (const auto& jf : j.at("fibers")) {
    localize::Fiber fb;
    fb.weight = jf.at("weight").get<double>();
    fb.density = read_density_csv(jf.at("density_csv").get<std::string>());
    if (jf.contains("function_csv"))
      fb.function = read_function_csv(
          jf.at("function_csv").get<std::string>(), fb.density);
    else
      fb.function.assign(fb.density.size(), 0.0);
    d.fibers.push_back(std::move(fb));
  }
  if (j.contains("singular"))
    for (const auto& jz : j.at("singular"))
      d.singular.push_back({jz.at("weight").get<double>(),
                            jz.value("value", 0.0)});
  return d;
}

}  // namespace cdkn::io

#endif  // CDKN_IO_HPP
