#include "ssrqec/hilbert_io.hpp"

#include <stdexcept>

namespace ssrqec {

namespace {

ProductSpace space_from(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
    throw std::invalid_argument("interchange: 'dims' must be a non-empty array");
  std::vector<Index> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1)
      throw std::invalid_argument("interchange: dims must be positive integers");
    dims.push_back(d.get<Index>());
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return ProductSpace(std::move(dims), std::move(labels));
}

std::vector<cplx> payload_from(const nlohmann::json& j) {
  for (const char* key : {"re", "im"})
    if (!j.contains(key) || !j[key].is_array())
      throw std::invalid_argument(std::string("interchange: '") + key + "' must be an array");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (re.size() != im.size()) throw std::invalid_argument("interchange: re/im length mismatch");
  std::vector<cplx> out(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) {
    if (!re[k].is_number() || !im[k].is_number())
      throw std::invalid_argument("interchange: non-numeric entry");
    out[k] = {re[k].get<double>(), im[k].get<double>()};
  }
  return out;
}

nlohmann::json encode(const ProductSpace& space, const cplx* data, std::size_t n) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (std::size_t k = 0; k < n; ++k) {
    re.push_back(data[k].real());
    im.push_back(data[k].imag());
  }
  nlohmann::json j = {{"dims", space.dims()}, {"re", re}, {"im", im}};
  bool any_label = false;
  for (const auto& l : space.labels()) any_label |= !l.empty();
  if (any_label) j["labels"] = space.labels();
  return j;
}

}  // namespace

nlohmann::json to_json(const StateVector& psi) {
  return encode(psi.space(), psi.amplitudes().data(), psi.dim());
}

nlohmann::json to_json(const Operator& op) {
  using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor m = op.to_dense();
  return encode(op.space(), m.data(), static_cast<std::size_t>(m.size()));
}

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

HilbertObject hilbert_from_json(const nlohmann::json& j) {
  ProductSpace space = space_from(j);
  const auto data = payload_from(j);
  const Index d = space.dim();
  if (data.size() == d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d));
    for (Index k = 0; k < d; ++k) v[static_cast<Eigen::Index>(k)] = data[k];
    return StateVector(std::move(space), std::move(v));
  }
  if (data.size() == d * d) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * d + c];
    return Operator::dense(std::move(space), std::move(m));
  }
  throw std::invalid_argument("interchange: payload length is neither D nor D*D");
}

StateVector state_from_json(const nlohmann::json& j) {
  auto obj = hilbert_from_json(j);
  if (auto* s = std::get_if<StateVector>(&obj)) return std::move(*s);
  throw std::invalid_argument("interchange: expected a vector");
}

Operator operator_from_json(const nlohmann::json& j) {
  auto obj = hilbert_from_json(j);
  if (auto* o = std::get_if<Operator>(&obj)) return std::move(*o);
  throw std::invalid_argument("interchange: expected a matrix");
}

}  // namespace ssrqec
