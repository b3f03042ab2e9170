#include "spindd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace spindd::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_meta(std::ostream& out, const Metadata& meta) {
  out << '#';
  for (const auto& [k, v] : meta) out << ' ' << k << '=' << v;
  out << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void write_profiles(std::ostream& out, const Trajectory& traj, const Grid1D& grid, const Metadata& meta) {
  write_meta(out, meta);
  out << kProfilesHeader << '\n';
  for (const State& s : traj.snapshots) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ratio = norm(s.nvec[i]) / s.n0[i];
      out << format_double(s.t) << ',' << format_double(grid.node(i)) << ',' << format_double(s.n0[i]) << ','
          << format_double(s.nvec[i][0]) << ',' << format_double(s.nvec[i][1]) << ','
          << format_double(s.nvec[i][2]) << ',' << format_double(s.V[i]) << ',' << format_double(ratio) << '\n';
    }
  }
}

void write_series(std::ostream& out, const std::vector<DiagnosticsRecord>& records, const Metadata& meta) {
  write_meta(out, meta);
  out << kSeriesHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.t) << ',' << format_double(r.S) << ',' << format_double(r.D) << ','
        << format_double(r.l2_spin) << ',' << format_double(r.linf_spin) << ',' << format_double(r.ratio_max) << ','
        << format_double(r.current_out) << ',' << format_double(r.reldiff) << '\n';
  }
}

void write_iv(std::ostream& out, const std::vector<diagnostics::IvRow>& rows, const Metadata& meta) {
  write_meta(out, meta);
  out << kIvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.V_A) << ',' << to_string(r.model) << ',' << format_double(r.current) << '\n';
  }
}

void write_equilibrium(std::ostream& out, const Grid1D& grid, const std::vector<double>& V_eq,
                       const std::vector<double>& C, const Metadata& meta) {
  write_meta(out, meta);
  out << "x,V_eq,n0,C\n";
  for (std::size_t i = 0; i < V_eq.size(); ++i) {
    out << format_double(grid.node(i)) << ',' << format_double(V_eq[i]) << ',' << format_double(std::exp(-V_eq[i]))
        << ',' << format_double(C[i]) << '\n';
  }
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return k;
  }
  throw ConfigError("missing CSV column '" + name + "'");
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cell = rows[r][c];
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
      throw ConfigError("row " + std::to_string(r + 1) + ", column '" + name + "': not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::string CsvTable::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return {};
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string w;
      while (words >> w) {
        const auto eq = w.find('=');
        if (eq != std::string::npos) t.meta.emplace_back(w.substr(0, eq), w.substr(eq + 1));
      }
      continue;
    }
    auto cells = split(line, ',');
    if (!header) {
      t.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw ConfigError(path.string() + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                        std::to_string(cells.size()) + " fields, expected " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!header) throw ConfigError(path.string() + ": no header row");
  return t;
}

namespace {

std::string header_of(const CsvTable& t) {
  std::string h;
  for (std::size_t k = 0; k < t.columns.size(); ++k) h += (k ? "," : "") + t.columns[k];
  return h;
}

double meta_number(const CsvTable& t, const std::string& key) {
  const std::string v = t.meta_value(key);
  if (v.empty()) return std::nan("");
  return std::strtod(v.c_str(), nullptr);
}

}  // namespace

std::vector<std::string> audit(const std::filesystem::path& series_path) {
  std::vector<std::string> issues;
  const CsvTable series = read_csv(series_path);
  if (header_of(series) != kSeriesHeader) {
    issues.push_back("series header is '" + header_of(series) + "'");
    return issues;
  }
  const auto t = series.numeric("t");
  const auto S = series.numeric("S");
  const auto D = series.numeric("D");
  const auto ratio = series.numeric("ratio_max");
  const auto l2 = series.numeric("l2_spin");
  const auto linf = series.numeric("linf_spin");
  if (t.empty()) issues.push_back("series has no rows");

  const bool entropy_decays = series.meta_value("model") == "qsde1" && meta_number(series, "V_A") == 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const std::string at = "t=" + format_double(t[k]) + ": ";
    if (!std::isfinite(t[k]) || !std::isfinite(S[k]) || !std::isfinite(D[k])) issues.push_back(at + "non-finite value");
    if (k > 0 && !(t[k] > t[k - 1])) issues.push_back(at + "times not strictly increasing");
    if (D[k] < -1e-10) issues.push_back(at + "negative dissipation " + format_double(D[k]));
    if (!(ratio[k] >= 0.0 && ratio[k] < 1.0)) issues.push_back(at + "|n|/n0 = " + format_double(ratio[k]));
    if (l2[k] < 0.0 || linf[k] < 0.0) issues.push_back(at + "negative spin norm");
    if (entropy_decays && k > 0 && S[k] > S[k - 1] + 1e-10) {
      issues.push_back(at + "entropy increased by " + format_double(S[k] - S[k - 1]));
    }
  }

  const auto profiles_path = series_path.parent_path() / "profiles.csv";
  if (std::filesystem::exists(profiles_path)) {
    const CsvTable prof = read_csv(profiles_path);
    if (header_of(prof) != kProfilesHeader) {
      issues.push_back("profiles header is '" + header_of(prof) + "'");
      return issues;
    }
    const auto pt = prof.numeric("t");
    const auto n0 = prof.numeric("n0");
    const auto pr = prof.numeric("ratio");
    const double M = meta_number(prof, "M");
    const double m = meta_number(prof, "m");
    const double lambda_D2 = meta_number(prof, "lambda_D2");
    const double t0 = pt.empty() ? 0.0 : pt.front();
    for (std::size_t k = 0; k < n0.size(); ++k) {
      const std::string at = "profiles row " + std::to_string(k + 1) + ": ";
      if (!(n0[k] > 0.0)) issues.push_back(at + "n0 <= 0");
      if (!(pr[k] < 1.0)) issues.push_back(at + "|n|/n0 >= 1");
      if (std::isfinite(M) && n0[k] > M + 1e-8) issues.push_back(at + "n0 above the maximum-principle bound");
      if (std::isfinite(m) && std::isfinite(lambda_D2) && n0[k] < m * std::exp(-(pt[k] - t0) / lambda_D2) - 1e-8) {
        issues.push_back(at + "n0 below the maximum-principle bound");
      }
    }
  }
  return issues;
}

}  // namespace spindd::io
