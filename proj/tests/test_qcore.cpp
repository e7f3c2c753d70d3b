#include <cmath>
#include <complex>

#include <doctest.h>

#include "oracles.hpp"
#include "qsgd/qcore/linalg.hpp"
#include "qsgd/qcore/matrix.hpp"
#include "qsgd/qcore/pauli.hpp"
#include "qsgd/qcore/rng.hpp"

using namespace qsgd;

namespace {

CMatrix random_hermitian(int dim, RngStream& rng) {
  CMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cdouble(rng.normal(), rng.normal());
  CMatrix h = g;
  h += g.adjoint();
  h *= 0.5;
  return h;
}

CMatrix random_density(int dim, RngStream& rng) {
  CMatrix g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cdouble(rng.normal(), rng.normal());
  CMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

Ket random_ket(int dim, RngStream& rng) {
  Ket k(dim);
  for (auto& v : k.amp) v = cdouble(rng.normal(), rng.normal());
  k.normalize();
  return k;
}

double max_diff(const CMatrix& a, const CMatrix& b) {
  CMatrix d = a;
  d -= b;
  return d.max_abs();
}

}  // namespace

TEST_CASE("pauli_matrix: X, identity, -ZZ") {
  const CMatrix x = pauli_matrix(PauliString::from_text("X"));
  CHECK(x(0, 1) == cdouble(1, 0));
  CHECK(x(1, 0) == cdouble(1, 0));
  CHECK(x(0, 0) == cdouble(0, 0));

  const CMatrix id4 = pauli_matrix(PauliString::from_text("II"));
  CHECK(max_diff(id4, CMatrix::identity(4)) == 0.0);

  const CMatrix mzz = pauli_matrix(PauliString::from_text("-ZZ"));
  CHECK(mzz(0, 0) == cdouble(-1, 0));
  CHECK(mzz(1, 1) == cdouble(1, 0));
  CHECK(mzz(2, 2) == cdouble(1, 0));
  CHECK(mzz(3, 3) == cdouble(-1, 0));
}

TEST_CASE("pauli_matrix is unitary, Hermitian iff phase real") {
  RngStream rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    PauliString p;
    for (int q = 0; q < 3; ++q) p.letters.push_back(static_cast<uint8_t>(rng.uniform_int(4)));
    p.quarter_turns = static_cast<uint8_t>(rng.uniform_int(4));
    const CMatrix m = pauli_matrix(p);
    CHECK(m.is_unitary(1e-12));
    CHECK(m.is_hermitian(1e-12) == p.phase_is_real());
  }
}

TEST_CASE("pauli_product: XY = iZ, s*s = I, (XxZ)(YxZ) = i ZxI") {
  const auto xy = pauli_product(PauliString::from_text("X"), PauliString::from_text("Y"));
  CHECK(xy.text() == "+iZ");

  RngStream rng(12);
  PauliString s;
  for (int q = 0; q < 4; ++q) s.letters.push_back(static_cast<uint8_t>(rng.uniform_int(4)));
  const auto ss = pauli_product(s, s);
  CHECK(ss.is_identity_string());
  CHECK(ss.quarter_turns == 0);

  const auto xz_yz = pauli_product(PauliString::from_text("XZ"), PauliString::from_text("YZ"));
  // derived by multiplying the dense 4x4 realizations
  const CMatrix lhs = pauli_matrix(PauliString::from_text("XZ")) *
                      pauli_matrix(PauliString::from_text("YZ"));
  CHECK(max_diff(lhs, pauli_matrix(xz_yz)) < 1e-14);
  CHECK(xz_yz.text() == "+iZI");
}

TEST_CASE("pauli_product matches dense multiplication exhaustively (d<=2) and randomized (d<=4)") {
  for (int c1 = 0; c1 < 16; ++c1) {
    for (int c2 = 0; c2 < 16; ++c2) {
      const auto r = pauli_from_code(c1, 2);
      const auto s = pauli_from_code(c2, 2);
      const CMatrix dense = pauli_matrix(r) * pauli_matrix(s);
      CHECK(max_diff(dense, pauli_matrix(pauli_product(r, s))) < 1e-14);
    }
  }
  RngStream rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    const int d = 3 + rng.uniform_int(2);
    const auto r = pauli_from_code(rng.uniform_int(1 << (2 * d)), d);
    const auto s = pauli_from_code(rng.uniform_int(1 << (2 * d)), d);
    const auto t = pauli_from_code(rng.uniform_int(1 << (2 * d)), d);
    const CMatrix dense = pauli_matrix(r) * pauli_matrix(s);
    CHECK(max_diff(dense, pauli_matrix(pauli_product(r, s))) < 1e-13);
    // associativity
    const auto left = pauli_product(pauli_product(r, s), t);
    const auto right = pauli_product(r, pauli_product(s, t));
    CHECK(left == right);
  }
}

TEST_CASE("pauli_exp: identity at zero, iX at pi/2, expm oracle, additivity") {
  const CMatrix id = pauli_exp(PauliString::from_text("X"), 0.0);
  CHECK(max_diff(id, CMatrix::identity(2)) < 1e-15);

  const CMatrix ix = pauli_exp(PauliString::from_text("X"), std::numbers::pi / 2);
  CMatrix want = pauli_matrix(PauliString::from_text("X"));
  want *= cdouble(0, 1);
  CHECK(max_diff(ix, want) < 1e-15);

  const auto zz = PauliString::from_text("ZZ");
  CMatrix h = pauli_matrix(zz);
  h *= cdouble(0, 0.3);
  CHECK(max_diff(pauli_exp(zz, 0.3), test::taylor_expm(h)) < 1e-10);

  RngStream rng(14);
  for (int rep = 0; rep < 8; ++rep) {
    const auto p = pauli_from_code(rng.uniform_int(64), 3);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    CHECK(max_diff(pauli_exp(p, a) * pauli_exp(p, b), pauli_exp(p, a + b)) < 1e-12);
    CHECK(pauli_exp(p, a).is_unitary(1e-12));
  }

  CHECK_THROWS(pauli_exp(PauliString::from_text("+iX"), 0.5));
}

TEST_CASE("PauliAction matches dense products and exp-conjugation") {
  RngStream rng(15);
  for (int rep = 0; rep < 12; ++rep) {
    const int d = 1 + rng.uniform_int(3);
    PauliString p = pauli_from_code(rng.uniform_int(1 << (2 * d)), d);
    p.quarter_turns = static_cast<uint8_t>(2 * rng.uniform_int(2));
    const PauliAction act(p);
    const CMatrix sigma = pauli_matrix(p);
    const CMatrix a = random_hermitian(1 << d, rng);
    const CMatrix b = random_hermitian(1 << d, rng);

    CMatrix out;
    act.mul_left(a, out);
    CHECK(max_diff(out, sigma * a) < 1e-13);
    act.mul_right(a, out);
    CHECK(max_diff(out, a * sigma) < 1e-13);

    const double angle = rng.uniform(-1.5, 1.5);
    const CMatrix u = pauli_exp(p, angle);
    act.conjugate_exp(angle, a, out);
    CHECK(max_diff(out, u * a * u.adjoint()) < 1e-12);
    act.apply_exp_left(angle, a, out);
    CHECK(max_diff(out, u * a) < 1e-12);

    const cdouble t1 = act.trace_b_sigma_rho(b, a);
    CHECK(std::abs(t1 - (b * sigma * a).trace()) < 1e-12);
    const cdouble t2 = act.trace_b_rho_sigma(b, a);
    CHECK(std::abs(t2 - (b * a * sigma).trace()) < 1e-12);
  }
}

TEST_CASE("hermitian_eigenvalues: pinned spectra and trace identity") {
  CMatrix diag(2);
  diag(0, 0) = 2.0;
  diag(1, 1) = -1.0;
  auto ev = hermitian_eigenvalues(diag);
  CHECK(ev[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(-1.0).epsilon(1e-12));

  ev = hermitian_eigenvalues(pauli_matrix(PauliString::from_text("X")));
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(-1.0).epsilon(1e-12));

  RngStream rng(16);
  const CMatrix h = random_hermitian(8, rng);
  const auto sys = hermitian_eigensystem(h);
  double sum = 0.0;
  for (double v : sys.values) sum += v;
  CHECK(std::abs(sum - h.trace().real()) < 1e-10);
  // descending order
  for (size_t i = 1; i < sys.values.size(); ++i) CHECK(sys.values[i - 1] >= sys.values[i]);
  // reconstruction residual
  CMatrix rebuilt(8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      cdouble acc = 0.0;
      for (int k = 0; k < 8; ++k)
        acc += sys.vectors(i, k) * sys.values[k] * std::conj(sys.vectors(j, k));
      rebuilt(i, j) = acc;
    }
  CHECK(max_diff(rebuilt, h) < 1e-8);

  CMatrix nonherm(2);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS(hermitian_eigenvalues(nonherm));
}

TEST_CASE("trace_norm: pinned values, pure-state overlap formula, triangle inequality") {
  CMatrix half_diff(2);
  half_diff(0, 0) = -0.5;
  half_diff(1, 1) = 0.5;
  CHECK(trace_norm(half_diff) == doctest::Approx(1.0).epsilon(1e-12));

  RngStream rng(17);
  CHECK(trace_norm(random_density(8, rng)) == doctest::Approx(1.0).epsilon(1e-10));

  const Ket a = random_ket(4, rng);
  const Ket b = random_ket(4, rng);
  CMatrix diff = density(a);
  diff -= density(b);
  diff *= 0.5;
  cdouble overlap = 0.0;
  for (int i = 0; i < 4; ++i) overlap += std::conj(a.amp[i]) * b.amp[i];
  const double want = std::sqrt(1.0 - std::norm(overlap));
  CHECK(trace_norm(diff) == doctest::Approx(want).epsilon(1e-9));

  for (int rep = 0; rep < 5; ++rep) {
    const CMatrix x = random_hermitian(4, rng);
    const CMatrix y = random_hermitian(4, rng);
    CHECK(trace_norm(x + y) <= trace_norm(x) + trace_norm(y) + 1e-10);
  }
}

TEST_CASE("tensor and partial trace invert on product states") {
  RngStream rng(18);
  const CMatrix rho_a = random_density(4, rng);
  const CMatrix rho_b = random_density(2, rng);
  const CMatrix prod = tensor(rho_a, rho_b);
  const std::vector<int> traced{2};  // qubit index of the B factor in a 3-qubit register
  CHECK(max_diff(partial_trace(prod, 3, traced), rho_a) < 1e-12);
  const std::vector<int> keep_b{0, 1};
  CHECK(max_diff(partial_trace(prod, 3, keep_b), rho_b) < 1e-12);
}

TEST_CASE("embed_on_qubits places operators with qubit 0 as most significant") {
  const CMatrix z = pauli_matrix(PauliString::from_text("Z"));
  const std::vector<int> q0{0};
  CHECK(max_diff(embed_on_qubits(z, 2, q0), pauli_matrix(PauliString::from_text("ZI"))) == 0.0);
  const std::vector<int> q1{1};
  CHECK(max_diff(embed_on_qubits(z, 2, q1), pauli_matrix(PauliString::from_text("IZ"))) == 0.0);
}

TEST_CASE("expm matches the Taylor oracle and pauli_exp closed form") {
  RngStream rng(19);
  CMatrix h = random_hermitian(4, rng);
  h *= cdouble(0, 1);  // skew-Hermitian: unitary exponential
  const CMatrix e = expm(h);
  CHECK(max_diff(e, test::taylor_expm(h)) < 1e-12);
  CHECK(e.is_unitary(1e-12));

  const auto p = PauliString::from_text("XY");
  CMatrix arg = pauli_matrix(p);
  arg *= cdouble(0, 0.7);
  CHECK(max_diff(expm(arg), pauli_exp(p, 0.7)) < 1e-12);
}

TEST_CASE("commutator of commuting Paulis vanishes") {
  const CMatrix a = pauli_matrix(PauliString::from_text("XX"));
  const CMatrix b = pauli_matrix(PauliString::from_text("YY"));
  CHECK(commutator(a, b).max_abs() == 0.0);
  const CMatrix c = pauli_matrix(PauliString::from_text("XI"));
  const CMatrix d = pauli_matrix(PauliString::from_text("ZI"));
  CHECK(commutator(c, d).max_abs() > 1.0);
}

TEST_CASE("RngStream: determinism, children, ranges") {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream parent(7);
  RngStream c1 = parent.child(1);
  RngStream c2 = parent.child(2);
  CHECK(c1.next_u64() != c2.next_u64());
  // child derivation ignores the parent's consumption state
  RngStream parent2(7);
  (void)parent2.next_u64();
  CHECK(parent2.child(1).next_u64() == parent.child(1).next_u64());

  RngStream r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int k = r.uniform_int(7);
    CHECK(k >= 0);
    CHECK(k < 7);
  }
  // discrete respects weights
  const std::vector<double> w{0.0, 1.0, 0.0};
  for (int i = 0; i < 20; ++i) CHECK(r.discrete(w) == 1);
}

TEST_CASE("Ket norm and density") {
  Ket k(2);
  k.amp[0] = cdouble(3.0, 0.0);
  k.amp[1] = cdouble(0.0, 4.0);
  CHECK(k.norm() == doctest::Approx(5.0));
  k.normalize();
  const CMatrix rho = density(k);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(rho.is_hermitian(1e-12));
}
