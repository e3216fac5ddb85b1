#pragma once

#include <cstdint>
#include <string>

#include "cebench/bytes.hpp"

namespace cebench::corpus::gen {

/// Wiki-dump flavored English-like text: XML page scaffolding, Zipf word
/// frequencies, link/template markup, reused collocations. Calibrated so
/// the standard compressors land near real enwik8 ratios.
Bytes natural_text(std::uint64_t seed, std::uint64_t length);

/// Sensor-log CSV; `label` selects the column schema.
Bytes structured_csv(std::uint64_t seed, std::uint64_t length, const std::string& label);

/// Mixed-entropy binary packet stream (LiDAR-style measurement blocks or
/// telemetry status frames).
Bytes binary_packet(std::uint64_t seed, std::uint64_t length, const std::string& label);

/// PDF-like document: ASCII object scaffolding around alternating
/// compressible text streams and incompressible data streams.
Bytes document_binary(std::uint64_t seed, std::uint64_t length);

} // namespace cebench::corpus::gen
