#pragma once

// Reference computations that do not go through the library's linear
// algebra: direct enumeration, 2x2 transfer matrices and closed forms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// Spin of site i in basis index s of an n-site register, site 0 most
// significant; |0> has Z = +1.
inline int spin(std::uint64_t s, int i, int n) { return ((s >> (n - 1 - i)) & 1) ? -1 : 1; }

// Energy of a configuration of the open classical chain H = -J Σ s_i s_{i+1} - h Σ s_i.
inline double ising_energy(std::uint64_t s, int n, double j, double h) {
  double e = 0;
  for (int i = 0; i + 1 < n; ++i) e -= j * spin(s, i, n) * spin(s, i + 1, n);
  for (int i = 0; i < n; ++i) e -= h * spin(s, i, n);
  return e;
}

// Boltzmann probabilities of every configuration, by enumeration.
inline std::vector<double> ising_populations(int n, double j, double h, double beta) {
  std::vector<double> p(std::size_t(1) << n);
  double z = 0;
  for (std::uint64_t s = 0; s < p.size(); ++s) z += p[s] = std::exp(-beta * ising_energy(s, n, j, h));
  for (double& v : p) v /= z;
  return p;
}

// Connected correlation <s_a s_b> - <s_a><s_b> of the open chain from 2x2
// transfer matrices. Field weights are split evenly between the two bonds of
// each site, with the missing halves restored at the ends.
inline double ising_transfer_covariance(int n, double j, double h, double beta, int a, int b) {
  Eigen::Matrix2d t, zd, end;
  const double sv[2] = {1, -1};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      t(x, y) = std::exp(beta * (j * sv[x] * sv[y] + h * (sv[x] + sv[y]) / 2));
  zd = Eigen::Vector2d(1, -1).asDiagonal();
  end = Eigen::Vector2d(std::exp(beta * h / 2), std::exp(-beta * h / 2)).asDiagonal();
  auto expect = [&](std::vector<int> at) {
    Eigen::Matrix2d m = end;
    for (int i = 0; i < n; ++i) {
      for (int k : at)
        if (k == i) m = m * zd;
      if (i + 1 < n) m = m * t;
    }
    m = m * end;
    return m.sum();
  };
  const double z = expect({});
  return expect({a, b}) / z - (expect({a}) / z) * (expect({b}) / z);
}

// Kronecker product.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

// |0...0> + |1...1>, normalized, as a density matrix.
inline CMatrix ghz(int n) {
  const Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(0) = v(d - 1) = 1 / std::sqrt(2.0);
  return v * v.adjoint();
}

// Shannon entropy in bits.
inline double shannon_bits(const std::vector<double>& p) {
  double s = 0;
  for (double v : p)
    if (v > 0) s -= v * std::log2(v);
  return s;
}

// Random classical Markov chain a -> b -> c on na, nb, nc bits, returned as
// the diagonal of the joint distribution in register order (a, b, c).
inline std::vector<double> markov_chain(int na, int nb, int nc, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const int da = 1 << na, db = 1 << nb, dc = 1 << nc;
  auto normalized = [&](int k) {
    std::vector<double> v(k);
    double s = 0;
    for (double& x : v) s += x = u(rng);
    for (double& x : v) x /= s;
    return v;
  };
  std::vector<double> pa = normalized(da);
  std::vector<std::vector<double>> pba(da), pcb(db);
  for (auto& row : pba) row = normalized(db);
  for (auto& row : pcb) row = normalized(dc);
  std::vector<double> p(std::size_t(da) * db * dc);
  for (int x = 0; x < da; ++x)
    for (int y = 0; y < db; ++y)
      for (int z = 0; z < dc; ++z) p[(std::size_t(x) * db + y) * dc + z] = pa[x] * pba[x][y] * pcb[y][z];
  return p;
}

// Euclidean site distance on an open grid, from coordinates.
inline double grid_distance(int a, int b, int cols) {
  const double dx = a / cols - b / cols, dy = a % cols - b % cols;
  return std::sqrt(dx * dx + dy * dy);
}

// Patch-size iteration for err(l) = k e^{-c l}, evaluated in log space:
// log L_{m+1} = (log(target/(D k)) + c L_m) / D. Returns the number of
// growth steps needed to reach `side`, starting from the smallest integer
// scale that grows. -1 when growth never starts.
inline int exponential_levels(double side, int dim, double target, double k, double c) {
  auto log_next = [&](double l) { return (std::log(target / (dim * k)) + c * l) / dim; };
  long base = -1;
  for (long l = 1; l <= 1000000; ++l)
    if (log_next(double(l)) > std::log(double(l))) {
      base = l;
      break;
    }
  if (base < 0) return -1;
  int steps = 0;
  double l = double(base);
  while (l < side) {
    const double ln = log_next(l);
    l = ln > 700 ? INFINITY : std::exp(ln);
    ++steps;
  }
  return steps;
}

}  // namespace oracle
