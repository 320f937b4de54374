#include "oracles.hpp"

#include <cmath>

namespace oracle {

void gauss_golub_welsch(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    w[i] = 2.0 * v * v;
  }
}

void hierarchic_1d(int p, double x, std::vector<double>& v, std::vector<double>& dv) {
  std::vector<double> P(p + 1, 0.0);
  P[0] = 1.0;
  if (p >= 1) P[1] = x;
  for (int k = 2; k <= p; ++k) P[k] = ((2 * k - 1) * x * P[k - 1] - (k - 1) * P[k - 2]) / k;
  v.assign(p + 1, 0.0);
  dv.assign(p + 1, 0.0);
  v[0] = 0.5 * (1 - x);
  v[1] = 0.5 * (1 + x);
  dv[0] = -0.5;
  dv[1] = 0.5;
  for (int j = 2; j <= p; ++j) {
    v[j] = (P[j] - P[j - 2]) / std::sqrt(4.0 * j - 2.0);
    dv[j] = std::sqrt((2.0 * j - 1.0) / 2.0) * P[j - 1];
  }
}

Matrix6 isotropic(double E, double nu) {
  const double lam = E * nu / ((1 + nu) * (1 - 2 * nu));
  const double mu = E / (2 * (1 + nu));
  Matrix6 C = Matrix6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) C(i, j) = lam;
    C(i, i) = lam + 2 * mu;
    C(i + 3, i + 3) = mu;
  }
  return C;
}

Eigen::MatrixXd cell_stiffness(int p, const voxcell::Real3& h, const voxcell::Int3& vpc,
                               const Matrix6& C, std::span<const double> alphas, int q) {
  const int n1 = p + 1;
  const int nm = n1 * n1 * n1;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3 * nm, 3 * nm);
  std::vector<double> gx, gw;
  gauss_golub_welsch(q, gx, gw);
  Eigen::MatrixXd B(6, 3 * nm);
  std::vector<double> v[3], dv[3];
  for (int vk = 0; vk < vpc[2]; ++vk) {
    for (int vj = 0; vj < vpc[1]; ++vj) {
      for (int vi = 0; vi < vpc[0]; ++vi) {
        const double a = alphas[vi + vpc[0] * (vj + vpc[1] * vk)];
        const int vox[3] = {vi, vj, vk};
        for (int qk = 0; qk < q; ++qk) {
          for (int qj = 0; qj < q; ++qj) {
            for (int qi = 0; qi < q; ++qi) {
              const int qq[3] = {qi, qj, qk};
              double w = a;
              for (int d = 0; d < 3; ++d) {
                const double width = 2.0 / vpc[d];
                const double xi = -1.0 + width * (vox[d] + 0.5 * (gx[qq[d]] + 1.0));
                hierarchic_1d(p, xi, v[d], dv[d]);
                for (auto& g : dv[d]) g *= 2.0 / h[d];
                w *= gw[qq[d]] * 0.5 * width * 0.5 * h[d];
              }
              B.setZero();
              for (int c = 0; c < n1; ++c) {
                for (int b = 0; b < n1; ++b) {
                  for (int aa = 0; aa < n1; ++aa) {
                    const int l = aa + n1 * (b + n1 * c);
                    const double gxv = dv[0][aa] * v[1][b] * v[2][c];
                    const double gyv = v[0][aa] * dv[1][b] * v[2][c];
                    const double gzv = v[0][aa] * v[1][b] * dv[2][c];
                    B(0, 3 * l) = gxv;
                    B(1, 3 * l + 1) = gyv;
                    B(2, 3 * l + 2) = gzv;
                    B(3, 3 * l + 1) = gzv;
                    B(3, 3 * l + 2) = gyv;
                    B(4, 3 * l) = gzv;
                    B(4, 3 * l + 2) = gxv;
                    B(5, 3 * l) = gyv;
                    B(5, 3 * l + 1) = gxv;
                  }
                }
              }
              K.noalias() += w * B.transpose() * C * B;
            }
          }
        }
      }
    }
  }
  return K;
}

Matrix6 laminate(const Matrix6& C1, const Matrix6& C2, double f1) {
  // Normal set N = {zz, yz, xz}; in-plane set P = {xx, yy, xy}.
  const int N[3] = {2, 3, 4};
  const int P[3] = {0, 1, 5};
  auto blocks = [&](const Matrix6& C, Eigen::Matrix3d& nn, Eigen::Matrix3d& pn, Eigen::Matrix3d& pp) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        nn(i, j) = C(N[i], N[j]);
        pn(i, j) = C(P[i], N[j]);
        pp(i, j) = C(P[i], P[j]);
      }
    }
  };
  Eigen::Matrix3d nn1, pn1, pp1, nn2, pn2, pp2;
  blocks(C1, nn1, pn1, pp1);
  blocks(C2, nn2, pn2, pp2);
  const double f2 = 1.0 - f1;
  const Eigen::Matrix3d inn1 = nn1.inverse(), inn2 = nn2.inverse();
  const Eigen::Matrix3d NN = (f1 * inn1 + f2 * inn2).inverse();
  const Eigen::Matrix3d avg_pn_inn = f1 * pn1 * inn1 + f2 * pn2 * inn2;
  const Eigen::Matrix3d PN = avg_pn_inn * NN;
  const Eigen::Matrix3d PP = f1 * pp1 + f2 * pp2 -
                             (f1 * pn1 * inn1 * pn1.transpose() + f2 * pn2 * inn2 * pn2.transpose()) +
                             avg_pn_inn * NN * avg_pn_inn.transpose();
  Matrix6 C = Matrix6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      C(N[i], N[j]) = NN(i, j);
      C(P[i], N[j]) = PN(i, j);
      C(N[j], P[i]) = PN(i, j);
      C(P[i], P[j]) = PP(i, j);
    }
  }
  return C;
}

Matrix6 rotate(const Matrix6& C, const Eigen::Matrix3d& R) {
  const int vi[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};
  auto c4 = [&](int i, int j, int k, int l) { return C(vi[i][j], vi[k][l]); };
  Matrix6 out = Matrix6::Zero();
  const int pairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}};
  for (int I = 0; I < 6; ++I) {
    for (int J = 0; J < 6; ++J) {
      const int i = pairs[I][0], j = pairs[I][1], k = pairs[J][0], l = pairs[J][1];
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) s += R(i, a) * R(j, b) * R(k, c) * R(l, d) * c4(a, b, c, d);
      out(I, J) = s;
    }
  }
  return out;
}

Eigen::MatrixXd hilbert_inverse(int n) {
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  Eigen::MatrixXd inv(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      inv(i - 1, j - 1) = sign * (i + j - 1) * binom(n + i - 1, n - j) * binom(n + j - 1, n - i) *
                          binom(i + j - 2, i - 1) * binom(i + j - 2, i - 1);
    }
  }
  return inv;
}

voxcell::VoxelGrid rotate_z90(const voxcell::VoxelGrid& g) {
  const auto d = g.dims();
  const auto s = g.spacing();
  voxcell::VoxelGrid out({d[1], d[0], d[2]}, {s[1], s[0], s[2]}, g.alpha_void());
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        out.set_material(d[1] - 1 - j, i, k, g.is_material(i, j, k));
      }
    }
  }
  return out;
}

double min_eigenvalue(const Matrix6& A) {
  const Matrix6 S = 0.5 * (A + A.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix6>(S).eigenvalues().minCoeff();
}

}  // namespace oracle
