#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "volcap/asympt.hpp"
#include "volcap/capacity.hpp"
#include "volcap/control.hpp"
#include "volcap/galerkin.hpp"
#include "volcap/matfun.hpp"
#include "volcap/modelbvp.hpp"

namespace volcap {

using json = nlohmann::ordered_json;

/// { rows, cols, breakpoints, pieces: [{interval: [a, b], coeffs: rows x cols x (D+1)}] }
json to_json(const MatrixFunction& f);
MatrixFunction matrix_function_from_json(const json& j);

/// Reads a MatrixFunction from a file; ParseError on malformed input.
MatrixFunction load_matrix_function(const std::string& path);

/// Capacity and fit payloads tag each number with its provenance.
json to_json(const CapacityResult& c, int max_samples = 257);
json to_json(const SpectrumResult& s);
json to_json(const CapacityFit& f);
json to_json(const SkewFactorization& f);
json to_json(const CheckReport& r);
json to_json(const ConditionReport& r);
json to_json(const GramResult& g);
json to_json(const HessianBound& h);

/// n, lambda_n rows with n in Z: negatives first (most negative last), then positives.
void write_spectrum_csv(std::ostream& out, const SpectrumResult& s);
/// r, lambda_r rows of a model spectrum.
void write_model_csv(std::ostream& out, const SpectrumResult& s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace volcap
