#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "htype/classifier.hpp"
#include "htype/lie_core.hpp"

namespace htype {

inline constexpr std::string_view kAlgebraFormat = "htype-algebra/v1";
inline constexpr std::string_view kCertificateFormat = "htype-certificate/v1";
inline constexpr std::string_view kToolVersion = "0.1.0";

using Metadata = std::map<std::string, std::string>;

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

struct AlgebraDocument {
  StructuredAlgebra value;
  Metadata metadata;
};

struct LoadOptions {
  bool validate = true;
  double tol = kDefaultTolerance;
};

/// Default tolerance, overridable through the HTYPE_TOL environment variable.
double default_tolerance();

AlgebraDocument parse_algebra(std::string_view text, const LoadOptions& options = {});
std::string serialize_algebra(const StructuredAlgebra& value, const Metadata& metadata = {});

AlgebraDocument load_algebra(const std::filesystem::path& path, const LoadOptions& options = {});
void save_algebra(const StructuredAlgebra& value, const std::filesystem::path& path, const Metadata& metadata = {});

struct CertificateDocument {
  Classification::Kind kind = Classification::Kind::verdict;
  double tolerance_used = kDefaultTolerance;
  std::string tool_version;
  Classification content;
};

std::string_view to_string(Classification::Kind kind);

std::string serialize_certificate(const Classification& classification, double tol);
CertificateDocument parse_certificate(std::string_view text);
CertificateDocument load_certificate(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace htype
