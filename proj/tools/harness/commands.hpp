#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "abbm/gumbel.hpp"
#include "io.hpp"

namespace abbm::harness {

/// Entry point of the abbm binary. Returns the process exit code:
/// 0 ok, 2 configuration error, 3 runtime or resource error, 4 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Gumbel fit on a dataset's centered maxima at t with the Z~ proxy at s.
GumbelMixtureFit fit_dataset(const Dataset& dataset, double t, double proxy_time);

Json fit_json(const GumbelMixtureFit& fit, double t, double proxy_time);

/// Oracle catalogue; `params` are key=value pairs.
Json run_oracle(const std::string& name, const std::map<std::string, std::string>& params, std::ostream& out);

std::vector<std::string> oracle_catalog();

}  // namespace abbm::harness
