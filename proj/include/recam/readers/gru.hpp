#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "recam/nn.hpp"

namespace recam::readers {

// Gated recurrent unit. Gate blocks are stacked row-wise as
// [update; reset; candidate] in w (3h x d), u (3h x h) and b (3h x 1):
//   z = sigmoid(Wz x + Uz h + bz)
//   r = sigmoid(Wr x + Ur h + br)
//   n = tanh(Wn x + Un (r .* h) + bn)
//   h' = (1 - z) .* h + z .* n
class GruCell {
 public:
  struct Cache {
    Eigen::MatrixXd x, h_prev, z, r, n;
  };

  GruCell() = default;
  GruCell(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden);

  Eigen::Index input_dim() const { return w.value.cols(); }
  Eigen::Index hidden() const { return u.value.cols(); }
  void init(nn::Rng& rng);

  // x: input_dim x T. Returns hidden x T. `cache` may be null.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache) const;
  // dh: hidden x T gradient of the outputs. Accumulates parameter
  // gradients; returns the gradient of x.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& dh);

  nn::Param w, u, b;
};

// Bidirectional GRU; output column t is [forward_t; backward_t] (2h).
class BiGru {
 public:
  struct Cache {
    GruCell::Cache fwd, bwd;
  };

  BiGru() = default;
  BiGru(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden);

  Eigen::Index input_dim() const { return fwd_.input_dim(); }
  Eigen::Index hidden() const { return fwd_.hidden(); }
  Eigen::Index output_dim() const { return 2 * fwd_.hidden(); }
  void init(nn::Rng& rng);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache* cache) const;
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& dh);

  std::vector<nn::Param*> parameters() { return {&fwd_.w, &fwd_.u, &fwd_.b, &bwd_.w, &bwd_.u, &bwd_.b}; }

 private:
  GruCell fwd_, bwd_;
};

// Throws DomainError on a dimension mismatch or an empty sequence.
Eigen::MatrixXd encode(const Eigen::MatrixXd& embedded, const BiGru& encoder);

}  // namespace recam::readers
