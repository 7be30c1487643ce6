#pragma once

#include <string>

#include "fcpd/sample.hpp"

namespace fcpd {

enum class SampleFormat { csv_rows, json };

// Loads a functional sample from disk.
//
// csv_rows: UTF-8, comma separated, '.' decimal, one curve per row with
// S*r numeric columns (component-major); an optional leading label
// column and an optional header line are auto-detected. Without grid
// metadata the grid defaults to S points on [0,1].
//
// json: object {grid:{dim,points_per_axis,spacing}, r, values:[[..]],
// labels:[..]} with labels optional.
//
// Throws FormatError for malformed files and DataError for finite-ness
// or size violations.
FunctionalSample load_sample(const std::string& path, SampleFormat format);

// Infers the format from the file extension (.json -> json, else csv).
FunctionalSample load_sample(const std::string& path);

void save_sample_csv(const FunctionalSample& sample, const std::string& path);
void save_sample_json(const FunctionalSample& sample, const std::string& path);

}  // namespace fcpd
