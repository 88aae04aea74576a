#pragma once

#include <string>

#include "cjsr/system.hpp"

namespace cjsr {

/// Raised on malformed documents; the message carries the JSON path or byte
/// position of the offending element.
class DocumentError : public Error {
 public:
  explicit DocumentError(const std::string& what) : Error(what) {}
};

/// Parses the versioned system document (see docs/format.md).
ConstrainedSystem parse_system_document(const std::string& text);
ConstrainedSystem load_system_document(const std::string& path);

std::string emit_system_document(const ConstrainedSystem& sys);
void save_system_document(const ConstrainedSystem& sys, const std::string& path);

}  // namespace cjsr
