#include "heateta/algebra.hpp"

#include <bit>

namespace heateta {

Mat& Mat::operator+=(const Mat& o) {
  if (p_ != o.p_) throw CheckError("matrix size mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (p_ != o.p_) throw CheckError("matrix size mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(const ExactScalar& s) {
  for (auto& v : a_) v *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.p() != b.p()) throw CheckError("matrix size mismatch");
  Mat out(a.p());
  for (int r = 0; r < a.p(); ++r)
    for (int k = 0; k < a.p(); ++k) {
      if (a.at(r, k).is_zero()) continue;
      for (int c = 0; c < a.p(); ++c) {
        ExactScalar t = a.at(r, k);
        t *= b.at(k, c);
        out.at(r, c) += t;
      }
    }
  return out;
}

Mat Mat::operator-() const {
  Mat m(p_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = -a_[i];
  return m;
}

CliffordCoef quantize(const FormCoef& u) {
  CliffordCoef out(u.n(), u.p());
  for (const auto& [mask, m] : u.table()) out.add(mask, m);
  return out;
}

FormCoef symbolize(const CliffordCoef& u) {
  FormCoef out(u.n(), u.p());
  for (const auto& [mask, m] : u.table()) out.add(mask, m);
  return out;
}

ExactScalar spinor_trace_word_constant(int n, int word_length) {
  if (n <= 0 || n % 2 == 0)
    throw ValidationError("spinor trace requires odd dimension");
  int half = n / 2;
  Rational dim = pow(Rational(2), half);
  if (word_length == 0) return ExactScalar(dim);
  if (word_length == n) return i_pow(-(half + 1)) * ExactScalar(dim);
  return ExactScalar(0);
}

ExactScalar spinor_trace(const CliffordCoef& u) {
  ExactScalar t;
  for (const auto& [mask, m] : u.table()) {
    int len = std::popcount(mask);
    if (len != 0 && len != u.n()) continue;
    t += spinor_trace_word_constant(u.n(), len) * m.trace();
  }
  return t;
}

std::string word_to_string(Basis b, uint32_t mask) {
  if (mask == 0) return "1";
  std::string out;
  const char* stem = b == Basis::Form ? "dx" : "c";
  const char* sep = b == Basis::Form ? "^" : "";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!(mask & (1u << i))) continue;
    if (!first) out += sep;
    out += stem;
    out += std::to_string(i + 1);
    first = false;
  }
  return out;
}

namespace {

std::string matrix_to_string(const Mat& m) {
  if (m.p() == 1) return "(" + to_string(m.at(0, 0)) + ")";
  std::string out = "[";
  for (int r = 0; r < m.p(); ++r) {
    out += r ? ";[" : "[";
    for (int c = 0; c < m.p(); ++c) {
      if (c) out += ",";
      out += to_string(m.at(r, c));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace

template <Basis B>
std::string to_string(const Graded<B>& g) {
  if (g.is_zero()) return "0";
  // Canonical order: by word length, then by increasing index word.
  std::vector<std::pair<uint32_t, const Mat*>> rows;
  for (const auto& [mask, m] : g.table()) rows.push_back({mask, &m});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    int la = std::popcount(a.first), lb = std::popcount(b.first);
    return la != lb ? la < lb : a.first < b.first;
  });
  std::string out;
  for (const auto& [mask, m] : rows) {
    if (!out.empty()) out += " + ";
    out += matrix_to_string(*m);
    if (mask != 0) out += "*" + word_to_string(B, mask);
  }
  return out;
}

template std::string to_string<Basis::Form>(const Graded<Basis::Form>&);
template std::string to_string<Basis::Clifford>(const Graded<Basis::Clifford>&);

}  // namespace heateta
