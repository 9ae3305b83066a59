#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "abbm/estimators.hpp"
#include "config.hpp"

namespace abbm::harness {

using Json = nlohmann::ordered_json;

/// Serialises JSON with every floating-point number printed to 17
/// significant digits; NaN and infinities become null.
std::string dump(const Json& value);

/// Header object shared by every output file.
Json provenance(const ExperimentConfig& cfg);

/// Resolved configuration as typed JSON (the header's "config" object).
Json config_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

/// JSON Lines stream: header, one line per (replica, checkpoint) ordered by
/// replica then checkpoint, footer.
void write_dataset(std::ostream& out, const ExperimentConfig& cfg, const Dataset& dataset);

/// Per-checkpoint summary table (functional, t, n, mean, se) with a '#' header block.
void write_summary_csv(std::ostream& out, const ExperimentConfig& cfg, const Dataset& dataset);

struct LoadedDataset {
  ExperimentConfig config;
  Json header;
  Dataset dataset;
};

/// Reads a stream written by write_dataset. Throws ConfigError on schema
/// problems (newer version, missing field, truncated stream) and
/// EmptyDataError when it holds no replica.
LoadedDataset read_dataset(std::istream& in);
LoadedDataset read_dataset_file(const std::string& path);

/// '#'-prefixed provenance lines for CSV outputs.
std::string csv_header_block(const ExperimentConfig& cfg);
std::string csv_header_block(const Json& provenance);

std::string fmt17(double v);

}  // namespace abbm::harness
