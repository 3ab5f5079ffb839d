#include "guided/io.hpp"

#include "guided/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace guided {

namespace fs = std::filesystem;

namespace {

double parse_double(const std::string& cell, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "CSV line " + std::to_string(line) + ": bad number '" + cell + "'");
  }
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no inf/nan
}

Json rows_of(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_of(const Json& rows, Index dim) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim) {
    throw Error(ErrorKind::Parse, "projector data must have dim rows");
  }
  const Index cols = dim == 0 ? 0 : static_cast<Index>(rows[0].size());
  Matrix m(dim, cols);
  for (Index i = 0; i < dim; ++i) {
    if (static_cast<Index>(rows[i].size()) != cols) throw Error(ErrorKind::Parse, "ragged matrix");
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << "# dim=" << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_vector_csv(std::ostream& out, const Vector& v) { write_matrix_csv(out, Matrix(v)); }

Matrix read_matrix_csv(std::istream& in) {
  std::string line;
  Index dim = -1;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      const auto pos = line.find("dim=");
      if (pos != std::string::npos) dim = std::stol(line.substr(pos + 4));
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, lineno));
    if (!rows.empty() && row.size() != rows[0].size()) {
      throw Error(ErrorKind::Parse, "CSV line " + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (dim < 0) throw Error(ErrorKind::Parse, "CSV is missing the '# dim=<n>' header");
  if (static_cast<Index>(rows.size()) != dim) {
    throw Error(ErrorKind::DimensionMismatch, "CSV header says dim=" + std::to_string(dim) +
                                                  " but has " + std::to_string(rows.size()) + " rows");
  }
  const Index cols = rows.empty() ? 0 : static_cast<Index>(rows[0].size());
  Matrix m(dim, cols);
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector read_vector_csv(std::istream& in) {
  const Matrix m = read_matrix_csv(in);
  if (m.cols() != 1) throw Error(ErrorKind::Parse, "vector CSV must have one value per line");
  return m.col(0);
}

Matrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_matrix_csv(in);
}

Vector read_vector_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_vector_csv(in);
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream ss;
  write_matrix_csv(ss, m);
  return ss.str();
}

std::string vector_csv(const Vector& v) {
  std::ostringstream ss;
  write_vector_csv(ss, v);
  return ss.str();
}

Json projector_to_json(const Projector& p) {
  Json j;
  j["repr"] = std::string(to_string(p.repr()));
  j["dim"] = p.dim();
  switch (p.repr()) {
    case ProjectorRepr::ExplicitMatrix:
      // complement() of an explicit matrix is already materialized.
      j["data"] = rows_of(p.matrix());
      break;
    case ProjectorRepr::OrthonormalBasis:
      j["data"] = rows_of(p.basis());
      break;
    case ProjectorRepr::CoordinateMask: {
      Json idx = Json::array();
      for (Index i : p.mask_indices()) idx.push_back(i + 1);
      j["data"] = std::move(idx);
      break;
    }
    case ProjectorRepr::SpectralFilter: {
      Json keep = Json::array();
      for (bool b : p.spectral_keep()) keep.push_back(b ? 1 : 0);
      j["data"] = {{"eigenvectors", rows_of(p.eigenvectors())}, {"keep", std::move(keep)}};
      break;
    }
    case ProjectorRepr::BlockAverage:
      j["data"] = {{"w", p.image_side()}, {"r", p.block_factor()}};
      break;
    case ProjectorRepr::DctLowpass:
      j["data"] = {{"w", p.image_side()}, {"k", p.lowpass_cutoff()}};
      break;
  }
  if (p.is_complement()) j["complement"] = true;
  return j;
}

Projector projector_from_json(const Json& j) {
  try {
    const ProjectorRepr repr = projector_repr_from_string(j.at("repr").get<std::string>());
    const auto dim = j.at("dim").get<Index>();
    const Json& data = j.at("data");
    auto build = [&]() -> Projector {
      switch (repr) {
        case ProjectorRepr::ExplicitMatrix:
          return Projector::explicit_matrix(matrix_of(data, dim));
        case ProjectorRepr::OrthonormalBasis:
          return Projector::orthonormal_basis(matrix_of(data, dim));
        case ProjectorRepr::CoordinateMask: {
          std::vector<Index> idx;
          for (const auto& v : data) idx.push_back(v.get<Index>() - 1);
          return Projector::coordinate_mask(dim, std::move(idx));
        }
        case ProjectorRepr::SpectralFilter: {
          auto u = std::make_shared<const Matrix>(matrix_of(data.at("eigenvectors"), dim));
          std::vector<bool> keep;
          for (const auto& v : data.at("keep")) keep.push_back(v.get<int>() != 0);
          return Projector::spectral_filter(std::move(u), std::move(keep));
        }
        case ProjectorRepr::BlockAverage:
          return Projector::block_average(data.at("w").get<Index>(), data.at("r").get<Index>());
        case ProjectorRepr::DctLowpass:
          return Projector::dct_lowpass(data.at("w").get<Index>(), data.at("k").get<Index>());
      }
      throw Error(ErrorKind::Parse, "unhandled projector repr");
    };
    Projector p = build();
    require_same_dim(p.dim(), dim, "projector JSON");
    if (j.value("complement", false)) p = p.complement();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("projector JSON: ") + e.what());
  }
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json to_json(const AngleReport& a) {
  Json j;
  j["angles"] = a.angles;
  j["theta_max"] = number(a.theta_max);
  j["cos_theta_max"] = number(a.cos_theta_max);
  j["minimal_gap"] = number(a.minimal_gap);
  j["condition_bound"] = number(a.condition_bound);
  j["all_orthogonal"] = a.all_orthogonal;
  j["no_nonzero_angle"] = a.no_nonzero_angle;
  return j;
}

Json to_json(const SolveResult& s) {
  Json j;
  j["solution"] = to_json(s.solution);
  j["iterations"] = s.iterations;
  j["residual_history"] = s.residual_history;
  j["converged"] = s.converged;
  j["final_relres"] = number(s.final_relres);
  return j;
}

Json to_json(const ReconstructionResult& r) {
  Json j;
  j["f_consistent"] = to_json(r.f_consistent);
  j["t_guided"] = to_json(r.t_guided);
  j["alpha"] = r.alpha ? Json(*r.alpha) : Json(nullptr);
  j["f_alpha"] = r.f_alpha ? to_json(*r.f_alpha) : Json(nullptr);
  Json solver = to_json(r.solver);
  solver.erase("solution");
  j["solver"] = std::move(solver);
  j["geometry"] = r.geometry ? to_json(*r.geometry) : Json(nullptr);
  j["gap_distance"] = number(r.gap_distance);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const BoundReport& b) {
  Json j;
  j["cos_theta_max"] = number(b.cos_theta_max);
  j["x_norm"] = number(b.x_norm);
  j["cos_bound"] = number(b.cos_bound);
  j["tan_bound"] = number(b.tan_bound);
  j["fn_norm_sq"] = number(b.fn_norm_sq);
  j["fnog_bound"] = number(b.fnog_bound);
  j["err_measured"] = number(b.err_measured);
  j["err_bound_cos2"] = number(b.err_bound_cos2);
  j["err_bound_cos1"] = number(b.err_bound_cos1);
  j["identity_m_residual"] = number(b.identity_m_residual);
  j["identity_n_residual"] = number(b.identity_n_residual);
  j["all_hold"] = b.all_hold();
  return j;
}

Json to_json(const UniquenessReport& u) {
  Json j;
  j["unique"] = u.unique;
  j["intersection_dim"] = u.intersection_dim;
  j["margin"] = number(u.margin);
  return j;
}

std::string residual_history_csv(const SolveResult& s) {
  std::string out = "iter,relres\n";
  for (std::size_t i = 0; i < s.residual_history.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_number(s.residual_history[i]) + '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace guided
