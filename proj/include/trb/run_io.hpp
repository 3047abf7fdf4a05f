#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trb/driver.hpp"

namespace trb {

inline constexpr const char* kVersion = "0.1.0";

/// j,i,f,decrease_ratio,gap,bundle_size,delta,dist_to_xstar,accepted
void write_iterates_csv(std::ostream& out, const RunResult& run);

/// One line per level: "j delta f x_1 ... x_n".
void write_handoff(std::ostream& out, const RunResult& run);

struct ManifestInfo {
  std::string instance_path;
  std::string family;
  std::uint64_t instance_seed = 0;
  double wall_seconds = 0.0;
  std::string status = "ok";  // or the error message of a failed run
};

std::string manifest_json(const RunConfig& config, const ManifestInfo& info, const RunResult& run,
                          const std::vector<EnclosureLevel>& enclosure);

struct ManifestConfig {
  RunConfig config;
  std::string instance_path;
};

/// Reads back the config echo of a manifest.
ManifestConfig read_manifest(const std::string& text);

/// x,f over [lo, hi] for a one-dimensional oracle.
void write_plotdata(std::ostream& out, const Oracle& oracle, double lo, double hi, int count);

/// gnuplot script plotting `csv_name` (x,f columns).
void write_plot_script(std::ostream& out, const std::string& csv_name, const std::string& title);

std::string format_double(double v);

}  // namespace trb
