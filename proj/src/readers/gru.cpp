#include "recam/readers/gru.hpp"

#include "recam/error.hpp"

namespace recam::readers {

GruCell::GruCell(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden)
    : w(prefix + ".w", 3 * hidden, input_dim),
      u(prefix + ".u", 3 * hidden, hidden),
      b(prefix + ".b", 3 * hidden, 1) {}

void GruCell::init(nn::Rng& rng) {
  const Eigen::Index h = hidden();
  for (int g = 0; g < 3; ++g) {
    Eigen::MatrixXd wg(h, input_dim());
    nn::glorot(wg, rng);
    w.value.middleRows(g * h, h) = wg;
    Eigen::MatrixXd ug(h, h);
    nn::glorot(ug, rng);
    u.value.middleRows(g * h, h) = ug;
  }
  b.value.setZero();
}

Eigen::MatrixXd GruCell::forward(const Eigen::MatrixXd& x, Cache* cache) const {
  if (x.rows() != input_dim()) {
    throw DomainError("GRU input has " + std::to_string(x.rows()) + " rows, expected " +
                      std::to_string(input_dim()));
  }
  const Eigen::Index h = hidden();
  const Eigen::Index steps = x.cols();
  Eigen::MatrixXd wx = (w.value * x).colwise() + b.value.col(0);
  Eigen::MatrixXd out(h, steps);
  if (cache != nullptr) {
    cache->x = x;
    cache->h_prev.resize(h, steps);
    cache->z.resize(h, steps);
    cache->r.resize(h, steps);
    cache->n.resize(h, steps);
  }
  Eigen::VectorXd state = Eigen::VectorXd::Zero(h);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::VectorXd zr = wx.col(t).head(2 * h) + u.value.topRows(2 * h) * state;
    Eigen::VectorXd z = nn::sigmoid(zr.head(h).array()).matrix();
    Eigen::VectorXd r = nn::sigmoid(zr.tail(h).array()).matrix();
    Eigen::VectorXd n =
        (wx.col(t).tail(h) + u.value.bottomRows(h) * r.cwiseProduct(state)).array().tanh().matrix();
    if (cache != nullptr) {
      cache->h_prev.col(t) = state;
      cache->z.col(t) = z;
      cache->r.col(t) = r;
      cache->n.col(t) = n;
    }
    state = (1.0 - z.array()) * state.array() + z.array() * n.array();
    out.col(t) = state;
  }
  return out;
}

Eigen::MatrixXd GruCell::backward(const Cache& cache, const Eigen::MatrixXd& dh) {
  const Eigen::Index h = hidden();
  const Eigen::Index steps = dh.cols();
  Eigen::MatrixXd da(3 * h, steps);
  Eigen::VectorXd carry = Eigen::VectorXd::Zero(h);
  const auto u_zr = u.value.topRows(2 * h);
  const auto u_n = u.value.bottomRows(h);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    const Eigen::VectorXd g = dh.col(t) + carry;
    const auto z = cache.z.col(t).array();
    const auto r = cache.r.col(t).array();
    const auto n = cache.n.col(t).array();
    const auto hp = cache.h_prev.col(t).array();

    Eigen::VectorXd da_n = (g.array() * z * (1.0 - n * n)).matrix();
    Eigen::VectorXd da_z = (g.array() * (n - hp) * z * (1.0 - z)).matrix();
    Eigen::VectorXd d_rh = u_n.transpose() * da_n;
    Eigen::VectorXd da_r = (d_rh.array() * hp * r * (1.0 - r)).matrix();

    da.col(t).head(h) = da_z;
    da.col(t).segment(h, h) = da_r;
    da.col(t).tail(h) = da_n;

    u.grad.topRows(2 * h) += da.col(t).head(2 * h) * cache.h_prev.col(t).transpose();
    u.grad.bottomRows(h) += da_n * (r * hp).matrix().transpose();

    carry = (g.array() * (1.0 - z)).matrix() + u_zr.transpose() * da.col(t).head(2 * h) +
            (d_rh.array() * r).matrix();
  }
  w.grad += da * cache.x.transpose();
  b.grad += da.rowwise().sum();
  return w.value.transpose() * da;
}

BiGru::BiGru(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden)
    : fwd_(prefix + ".fwd", input_dim, hidden), bwd_(prefix + ".bwd", input_dim, hidden) {}

void BiGru::init(nn::Rng& rng) {
  fwd_.init(rng);
  bwd_.init(rng);
}

Eigen::MatrixXd BiGru::forward(const Eigen::MatrixXd& x, Cache* cache) const {
  const Eigen::Index h = hidden();
  Eigen::MatrixXd out(2 * h, x.cols());
  out.topRows(h) = fwd_.forward(x, cache ? &cache->fwd : nullptr);
  Eigen::MatrixXd reversed = x.rowwise().reverse();
  out.bottomRows(h) = bwd_.forward(reversed, cache ? &cache->bwd : nullptr).rowwise().reverse();
  return out;
}

Eigen::MatrixXd BiGru::backward(const Cache& cache, const Eigen::MatrixXd& dh) {
  const Eigen::Index h = hidden();
  Eigen::MatrixXd dx = fwd_.backward(cache.fwd, dh.topRows(h));
  Eigen::MatrixXd dbwd = dh.bottomRows(h).rowwise().reverse();
  dx += bwd_.backward(cache.bwd, dbwd).rowwise().reverse();
  return dx;
}

Eigen::MatrixXd encode(const Eigen::MatrixXd& embedded, const BiGru& encoder) {
  if (embedded.cols() == 0) throw DomainError("cannot encode an empty sequence");
  return encoder.forward(embedded, nullptr);
}

}  // namespace recam::readers
