#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hpb/sweep.hpp"

namespace hpb {

// CSV: header row, comma delimiter, LF line endings, 17 significant digits in
// scientific notation and the literal NaN for undefined values. Contains no
// run-dependent metadata, so identical inputs give identical bytes.
void write_csv(const SweepResult& result, std::ostream& out);

// {"metadata": {...}, "rows": [...]}; undefined values are null.
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const PointReport& report);

void write_spectrum_csv(const std::vector<SpectrumRow>& rows, std::ostream& out);
nlohmann::json to_json(const std::vector<SpectrumRow>& rows);

std::string format_number(double value);

}  // namespace hpb
