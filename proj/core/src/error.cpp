#include "symdyn/error.hpp"

namespace symdyn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::depth_exceeded: return "depth-exceeded";
    case ErrorKind::not_in_language: return "not-in-language";
    case ErrorKind::empty_language: return "empty-language";
    case ErrorKind::expansion_uncertain: return "expansion-uncertain";
    case ErrorKind::no_periodic_points: return "no-periodic-points";
    case ErrorKind::no_valid_parameters: return "no-valid-parameters";
    case ErrorKind::cert_exhausted: return "cert-exhausted";
    case ErrorKind::not_specified: return "not-specified";
    case ErrorKind::periodic_g: return "periodic-G";
    case ErrorKind::not_synchronising: return "not-synchronising";
    case ErrorKind::inconsistent_decipherability: return "inconsistent-decipherability";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace symdyn
