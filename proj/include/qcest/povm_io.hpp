#pragma once

#include <string>

#include "qcest/estimator.hpp"

namespace qcest {

/// POVM file schema (JSON):
///   { "dimension": d, "copies": N,
///     "points": [ { "weight": w, "amplitudes": [[re, im], ...] }, ... ] }
/// Amplitudes are in the computational basis; doubles round-trip exactly.
std::string povm_to_json(const Povm& povm);
Povm povm_from_json(const std::string& text);

void povm_save(const Povm& povm, const std::string& path);
Povm povm_load(const std::string& path);

}  // namespace qcest
