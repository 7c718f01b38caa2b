#include "volcap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "volcap/errors.hpp"

namespace volcap {
namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json list(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json side_json(const SignFit& s) {
  return {{"available", s.available}, {"count", s.count}, {"slope", s.slope},
          {"value", s.value},         {"residual", s.residual}};
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const MatrixFunction& f) {
  json pieces = json::array();
  for (const auto& piece : f.pieces()) {
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < f.cols(); ++j) {
        json series = json::array();
        for (const auto& c : piece.coeffs) series.push_back(c(i, j));
        row.push_back(std::move(series));
      }
      coeffs.push_back(std::move(row));
    }
    pieces.push_back({{"interval", {piece.a, piece.b}}, {"coeffs", std::move(coeffs)}});
  }
  json out = {{"rows", f.rows()}, {"cols", f.cols()}, {"breakpoints", f.breakpoints()}, {"pieces", std::move(pieces)}};
  if (f.projection_residual() > 0.0) out["projection_residual"] = f.projection_residual();
  return out;
}

MatrixFunction matrix_function_from_json(const json& j) {
  try {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    if (rows < 0 || cols < 0) throw ParseError("matfun", "negative matrix dimensions");
    std::vector<MatrixFunction::Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      const auto& iv = p.at("interval");
      if (iv.size() != 2) throw ParseError("matfun", "interval must have two endpoints");
      const auto& coeffs = p.at("coeffs");
      if (static_cast<Eigen::Index>(coeffs.size()) != rows) throw ParseError("matfun", "coeffs must have `rows` rows");
      std::size_t degree = 0;
      for (const auto& row : coeffs) {
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matfun", "coeffs row length differs from `cols`");
        for (const auto& series : row) degree = std::max(degree, series.size());
      }
      if (degree == 0) degree = 1;
      MatrixFunction::Piece piece{iv[0].get<double>(), iv[1].get<double>(),
                                  std::vector<Eigen::MatrixXd>(degree, Eigen::MatrixXd::Zero(rows, cols))};
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
          const auto& series = coeffs[r][c];
          for (std::size_t d = 0; d < series.size(); ++d) piece.coeffs[d](r, c) = series[d].get<double>();
        }
      }
      pieces.push_back(std::move(piece));
    }
    MatrixFunction f(rows, cols, std::move(pieces), j.value("projection_residual", 0.0));
    if (j.contains("breakpoints") && j.at("breakpoints").get<std::vector<double>>() != f.breakpoints()) {
      throw ParseError("matfun", "breakpoints disagree with the piece intervals");
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("matfun", std::string("malformed matrix function: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError("matfun", e.what());
  } catch (const ShapeError& e) {
    throw ParseError("matfun", e.what());
  }
}

MatrixFunction load_matrix_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("matfun", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("matfun", path + ": " + e.what());
  }
  return matrix_function_from_json(j);
}

json to_json(const CapacityResult& c, int max_samples) {
  json out;
  out["provenance"] = "predicted";
  if (c.infinite) {
    out["order"] = "inf";
  } else {
    out["order"] = c.order;
    if (c.order % 2 == 1) {
      out["value"] = c.value;
    } else {
      out["value_pair"] = {{"plus", c.value_plus}, {"minus", c.value_minus}};
    }
  }
  json samples = json::array();
  const std::size_t n = c.mu.samples.size();
  const std::size_t stride = max_samples > 0 && n > static_cast<std::size_t>(max_samples) ? (n + max_samples - 1) / max_samples : 1;
  for (std::size_t i = 0; i < n; i += stride) {
    const auto& s = c.mu.samples[i];
    if (!c.infinite && c.order % 2 == 0) {
      samples.push_back({{"t", s.t}, {"mu_plus", s.plus}, {"mu_minus", s.minus}});
    } else {
      samples.push_back({{"t", s.t}, {"mu", s.plus}});
    }
  }
  out["mu_samples"] = std::move(samples);
  out["remainder_order"] = c.remainder_order;
  out["zero_test_margin"] = c.margin;
  out["quadrature"] = {{"nodes_per_piece", c.mu.nodes_per_piece}, {"converged", c.mu.converged}};
  return out;
}

json to_json(const SpectrumResult& s) {
  return {{"provenance", "computed"},
          {"basis_size", s.basis_size},
          {"asymmetry_residual", s.asymmetry_residual},
          {"positive", list(s.positive)},
          {"negative", list(s.negative)}};
}

json to_json(const CapacityFit& f) {
  json out = {{"provenance", "fitted"}, {"window", {f.window.lo, f.window.hi}}};
  out["order"] = f.infinite ? json("inf") : json(f.order);
  out["slope"] = f.slope;
  out["plus"] = side_json(f.plus);
  out["minus"] = side_json(f.minus);
  out["residual"] = f.residual();
  return out;
}

json to_json(const SkewFactorization& f) {
  json out = {{"provenance", "computed"}, {"rank", f.rank}, {"A0", matrix_to_json(f.A0)}};
  out["skew_eigs"] = f.skew_eigs;
  out["galerkin_skew_eigs"] = f.galerkin_skew_eigs;
  out["amplitudes"] = std::vector<double>(f.amplitudes.data(), f.amplitudes.data() + f.amplitudes.size());
  out["reconstruction_error"] = f.reconstruction_error;
  out["kernel_norm"] = f.kernel_norm;
  out["tolerance"] = f.tol_used;
  out["frame"] = to_json(f.frame);
  out["orthonormal_frame"] = to_json(f.orthonormal_frame);
  return out;
}

json to_json(const CheckReport& r) {
  return {{"pass", r.pass},       {"expected", number(r.expected)}, {"observed", number(r.observed)},
          {"worst", number(r.worst)}, {"checked", r.checked},        {"message", r.message}};
}

json to_json(const ConditionReport& r) {
  json out = {{"pass", r.pass}, {"witness_t", r.witness_t}, {"witness_value", number(r.witness_value)},
              {"message", r.message}};
  if (r.has_capacity) out["predicted_capacity"] = {{"order", 1}, {"value", r.capacity}, {"provenance", "predicted"}};
  return out;
}

json to_json(const GramResult& g) {
  return {{"provenance", "computed"}, {"gamma", matrix_to_json(g.gamma)}, {"min_eigenvalue", g.min_eigenvalue},
          {"surjective", g.surjective}};
}

json to_json(const HessianBound& h) {
  return {{"provenance", "computed"}, {"bound", h.bound}, {"r_l2", h.r_l2}, {"trace_integral", h.trace_integral},
          {"hessian_sampled", h.sampled}, {"hessian", to_json(h.hessian)}};
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s) {
  out << "n,lambda\n";
  for (std::size_t i = s.negative.size(); i-- > 0;) out << -static_cast<long>(i + 1) << ',' << format_double(s.negative[i]) << '\n';
  for (std::size_t i = 0; i < s.positive.size(); ++i) out << i + 1 << ',' << format_double(s.positive[i]) << '\n';
}

void write_model_csv(std::ostream& out, const SpectrumResult& s) {
  out << "r,lambda_r\n";
  for (std::size_t i = 0; i < s.positive.size(); ++i) out << i + 1 << ',' << format_double(s.positive[i]) << '\n';
  for (std::size_t i = 0; i < s.negative.size(); ++i) out << -static_cast<long>(i + 1) << ',' << format_double(s.negative[i]) << '\n';
}

}  // namespace volcap
