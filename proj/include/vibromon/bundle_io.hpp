#pragma once

#include <string>

#include "vibromon/pipeline.hpp"

namespace vibromon {

// Bundle file layout: magic "VDMB", version byte, length-prefixed sections
// (feature spec, standardization, one section per stored classifier), then a
// CRC32 trailer over everything before it. Numeric payloads are
// little-endian float64.
void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

}  // namespace vibromon
