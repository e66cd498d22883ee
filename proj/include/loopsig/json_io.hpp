#pragma once

#include <string>

#include "loopsig/fan.hpp"
#include "loopsig/laurent.hpp"
#include "loopsig/series.hpp"
#include "loopsig/signature.hpp"

namespace loopsig {

// {"dim": d, "rays": [[...]], "max_cones": [[...]]}; rays within cones
// sorted ascending, cones sorted lexicographically, faces never serialized.
std::string fan_to_json(const Fan& fan);
Fan fan_from_json(const std::string& text);
Fan load_fan_file(const std::string& path);

// JSON array of exact coefficient strings, index = exponent.
std::string series_to_json(const TruncatedSeries& series);
TruncatedSeries series_from_json(const std::string& text);

std::string loop_signature_result_to_json(const LoopSignatureResult& result);

// Equivariant terms serialize each m with the canonical numerator and
// denominator exponent/coefficient lists.
std::string equivariant_table_to_json(const std::vector<EquivariantTerm>& table);

}  // namespace loopsig
