#pragma once

// CSV outputs of a run or sweep, and the audit that re-checks them.
//
// Every file starts with one "# key=value ..." metadata line followed by the
// header row. Floats are printed with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spindd/diagnostics.hpp"
#include "spindd/timestepper.hpp"

namespace spindd::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kProfilesHeader = "t,x,n0,n1,n2,n3,V,ratio";
inline constexpr const char* kSeriesHeader = "t,S,D,l2_spin,linf_spin,ratio_max,current_out,reldiff";
inline constexpr const char* kIvHeader = "V_A,model,current";

std::string format_double(double v);

void write_profiles(std::ostream& out, const Trajectory& traj, const Grid1D& grid, const Metadata& meta);
void write_series(std::ostream& out, const std::vector<DiagnosticsRecord>& records, const Metadata& meta);
void write_iv(std::ostream& out, const std::vector<diagnostics::IvRow>& rows, const Metadata& meta);
/// x,V_eq,n0,C
void write_equilibrium(std::ostream& out, const Grid1D& grid, const std::vector<double>& V_eq,
                       const std::vector<double>& C, const Metadata& meta);

struct CsvTable {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> numeric(const std::string& name) const;
  /// Metadata value, or empty when absent.
  std::string meta_value(const std::string& key) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Re-checks the invariants recorded in a series.csv (and the profiles.csv
/// next to it, if present). Returns one message per violation.
std::vector<std::string> audit(const std::filesystem::path& series_path);

}  // namespace spindd::io
