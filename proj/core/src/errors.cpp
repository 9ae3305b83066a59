#include "abbm/errors.hpp"

namespace abbm {

int exit_code(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return 2;
  if (dynamic_cast<const NumericError*>(&e)) return 4;
  return 3;
}

}  // namespace abbm
