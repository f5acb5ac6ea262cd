#include "fracbv/spectral.hpp"

#include <numbers>

#include <unsupported/Eigen/FFT>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

// Transform of an m0 x m1 array. Forward: only the first `live` columns may be
// nonzero. Inverse: only the first `keep` rows are needed afterwards.
void fft2(Eigen::MatrixXcd& a, bool inverse, Index live = -1, Index keep = -1) {
  thread_local Eigen::FFT<double> fft;
  Eigen::VectorXcd in, out;
  const auto columns = [&](Index count) {
    for (Index c = 0; c < count; ++c) {
      in = a.col(c);
      if (inverse) fft.inv(out, in); else fft.fwd(out, in);
      a.col(c) = out;
    }
  };
  const auto rows = [&](Index count) {
    for (Index r = 0; r < count; ++r) {
      in = a.row(r).transpose();
      if (inverse) fft.inv(out, in); else fft.fwd(out, in);
      a.row(r) = out.transpose();
    }
  };
  if (a.cols() == 1) {
    columns(1);
    return;
  }
  if (!inverse) {
    columns(live < 0 ? a.cols() : live);
    rows(a.rows());
  } else {
    columns(a.cols());
    rows(keep < 0 ? a.rows() : keep);
  }
}

Index signed_index(Index k, Index m) { return k <= m / 2 ? k : k - m; }

// Sizes with small prime factors keep the mixed-radix transform fast.
Index good_size(Index n) {
  for (Index m = n;; ++m) {
    Index r = m;
    for (Index p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace

SpectralPlan::SpectralPlan(const Grid& grid, const SpectralConfig& config) : grid_(grid) {
  if (!config.periodic && config.padding_factor < 2) {
    throw InvalidArgument("spectral: padding factor must be at least 2");
  }
  for (int k = 0; k < grid.dim(); ++k) {
    n_[k] = grid.points(k);
    m_[k] = config.periodic ? n_[k] : good_size(config.padding_factor * n_[k]);
  }
}

Eigen::MatrixXcd SpectralPlan::forward(const Vector& values) const {
  return forward_complex(values.cast<std::complex<double>>());
}

Eigen::MatrixXcd SpectralPlan::forward_complex(const Eigen::VectorXcd& values) const {
  if (values.size() != grid_.size()) throw InvalidArgument("spectral: value count does not match grid");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m_[0], m_[1]);
  for (Index i1 = 0; i1 < n_[1]; ++i1) {
    for (Index i0 = 0; i0 < n_[0]; ++i0) a(i0, i1) = values[i0 + n_[0] * i1];
  }
  fft2(a, false, n_[1]);
  return a;
}

Vector SpectralPlan::inverse(Eigen::MatrixXcd spectrum) const { return inverse_complex(std::move(spectrum)).real(); }

Eigen::VectorXcd SpectralPlan::inverse_complex(Eigen::MatrixXcd spectrum) const {
  fft2(spectrum, true, -1, n_[0]);
  Eigen::VectorXcd out(grid_.size());
  for (Index i1 = 0; i1 < n_[1]; ++i1) {
    for (Index i0 = 0; i0 < n_[0]; ++i0) out[i0 + n_[0] * i1] = spectrum(i0, i1);
  }
  return out;
}

std::array<Eigen::MatrixXcd, 2> SpectralPlan::split(const Eigen::MatrixXcd& z) const {
  // z = A + i B with A, B transforms of real arrays
  std::array<Eigen::MatrixXcd, 2> out{Eigen::MatrixXcd(m_[0], m_[1]), Eigen::MatrixXcd(m_[0], m_[1])};
  for (Index k1 = 0; k1 < m_[1]; ++k1) {
    const Index r1 = (m_[1] - k1) % m_[1];
    for (Index k0 = 0; k0 < m_[0]; ++k0) {
      const std::complex<double> a = z(k0, k1), b = std::conj(z((m_[0] - k0) % m_[0], r1));
      out[0](k0, k1) = 0.5 * (a + b);
      out[1](k0, k1) = std::complex<double>(0.0, -0.5) * (a - b);
    }
  }
  return out;
}

Eigen::MatrixXd SpectralPlan::inverse_padded(Eigen::MatrixXcd spectrum) const {
  fft2(spectrum, true);
  return spectrum.real();
}

Eigen::MatrixXcd SpectralPlan::tabulate(const Multiplier& symbol) const {
  Eigen::MatrixXcd s(m_[0], m_[1]);
  for (Index k1 = 0; k1 < m_[1]; ++k1) {
    for (Index k0 = 0; k0 < m_[0]; ++k0) {
      Frequency f;
      const std::array<Index, 2> k{k0, k1};
      for (int ax = 0; ax < grid_.dim(); ++ax) {
        const Index sk = signed_index(k[ax], m_[ax]);
        f.xi[ax] = 2.0 * std::numbers::pi * static_cast<double>(sk) /
                   (static_cast<double>(m_[ax]) * grid_.spacing(ax));
        f.nyquist[ax] = (m_[ax] % 2 == 0) && (k[ax] == m_[ax] / 2);
      }
      s(k0, k1) = symbol(f);
    }
  }
  return s;
}

Vector apply_multiplier(const Grid& grid, const Vector& values, const Multiplier& symbol,
                        const SpectralConfig& config) {
  const SpectralPlan plan(grid, config);
  Eigen::MatrixXcd a = plan.forward(values);
  a.array() *= plan.tabulate(symbol).array();
  return plan.inverse(std::move(a));
}

OffsetConvolution::OffsetConvolution(const Grid& grid, const std::function<double(Index, Index)>& kernel)
    : n0_(grid.points(0)), n1_(grid.dim() == 2 ? grid.points(1) : 1), dim_(grid.dim()) {
  m0_ = good_size(2 * n0_ - 1);
  m1_ = dim_ == 2 ? good_size(2 * n1_ - 1) : 1;
  kernel_hat_ = Eigen::MatrixXcd::Zero(m0_, m1_);
  const Index r1 = dim_ == 2 ? n1_ - 1 : 0;
  for (Index o1 = -r1; o1 <= r1; ++o1) {
    for (Index o0 = -(n0_ - 1); o0 <= n0_ - 1; ++o0) {
      kernel_hat_((o0 + m0_) % m0_, (o1 + m1_) % m1_) = kernel(o0, o1);
    }
  }
  fft2(kernel_hat_, false);
}

Vector OffsetConvolution::run(const Vector& values, bool transpose) const {
  if (values.size() != n0_ * n1_) throw InvalidArgument("convolution: size mismatch");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m0_, m1_);
  for (Index i1 = 0; i1 < n1_; ++i1) {
    for (Index i0 = 0; i0 < n0_; ++i0) a(i0, i1) = values[i0 + n0_ * i1];
  }
  fft2(a, false);
  if (transpose) {
    a.array() *= kernel_hat_.array().conjugate();
  } else {
    a.array() *= kernel_hat_.array();
  }
  fft2(a, true);
  Vector out(n0_ * n1_);
  for (Index i1 = 0; i1 < n1_; ++i1) {
    for (Index i0 = 0; i0 < n0_; ++i0) out[i0 + n0_ * i1] = a(i0, i1).real();
  }
  return out;
}

Vector OffsetConvolution::apply(const Vector& values) const { return run(values, false); }

Vector OffsetConvolution::apply_transpose(const Vector& values) const { return run(values, true); }

}  // namespace fracbv
