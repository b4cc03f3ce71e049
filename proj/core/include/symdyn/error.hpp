#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symdyn {

enum class ErrorKind {
  depth_exceeded,
  not_in_language,
  empty_language,
  expansion_uncertain,
  no_periodic_points,
  no_valid_parameters,
  cert_exhausted,
  not_specified,
  periodic_g,
  not_synchronising,
  inconsistent_decipherability,
  invalid_argument,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symdyn
