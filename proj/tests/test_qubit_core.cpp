#include <catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "qsl/distance.hpp"
#include "qsl/generator.hpp"
#include "qsl/norms.hpp"
#include "qsl/propagation.hpp"
#include "qsl/state.hpp"

using namespace qsl;
using qsltest::Rng;

TEST_CASE("bloch_to_density maps the axis states to the expected projectors",
          "[qubit-core]") {
  // z = +1 is the excited state |1><1| by convention.
  const auto up = bloch_to_density({0, 0, 1}).matrix();
  CHECK(up.m00.real() == Catch::Approx(1.0).margin(1e-15));
  CHECK(std::abs(up.m01) == Catch::Approx(0.0).margin(1e-15));
  CHECK(up.m11.real() == Catch::Approx(0.0).margin(1e-15));

  const auto mixed = bloch_to_density({0, 0, 0}).matrix();
  CHECK(mixed.m00.real() == Catch::Approx(0.5));
  CHECK(mixed.m11.real() == Catch::Approx(0.5));
  CHECK(std::abs(mixed.m01) == Catch::Approx(0.0).margin(1e-15));

  // x = +1 is the equal superposition with real coherence 1/2.
  const auto plus = bloch_to_density({1, 0, 0}).matrix();
  CHECK(plus.m00.real() == Catch::Approx(0.5));
  CHECK(plus.m01.real() == Catch::Approx(0.5));
  CHECK(plus.m01.imag() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("bloch_to_density rejects vectors outside the ball", "[qubit-core]") {
  CHECK_THROWS_AS(bloch_to_density({1.0 + 1e-6, 0, 0}), PhysicsError);
  CHECK_NOTHROW(bloch_to_density({1.0, 0, 0}));
  CHECK_NOTHROW(bloch_to_density({1.0 + 0.5e-9, 0, 0}));
}

TEST_CASE("bloch/density round trip is exact to 1e-14", "[qubit-core]") {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector r = qsltest::random_bloch_in_ball(rng);
    const BlochVector back = density_to_bloch(bloch_to_density(r));
    CHECK((r - back).norm() <= 1e-14);
  }
}

TEST_CASE("density matrix construction validates its invariants", "[qubit-core]") {
  CHECK_THROWS_AS(DensityMatrix(Mat2{0.7, cplx(0.1, 0.2), cplx(0.1, 0.2), 0.3}),
                  PhysicsError);  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix(Mat2{0.8, 0.0, 0.0, 0.3}), PhysicsError);  // trace
  CHECK_THROWS_AS(DensityMatrix(Mat2{1.2, 0.0, 0.0, -0.2}), PhysicsError);  // psd
  CHECK_NOTHROW(DensityMatrix(Mat2{0.5, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.5}));
}

TEST_CASE("trace distance of identical and orthogonal states", "[qubit-core]") {
  Rng rng(7);
  const DensityMatrix rho = qsltest::random_density(rng);
  CHECK(trace_distance(rho, rho) == Catch::Approx(0.0).margin(1e-15));
  const DensityMatrix ground = bloch_to_density({0, 0, -1});
  const DensityMatrix excited = bloch_to_density({0, 0, 1});
  CHECK(trace_distance(ground, excited) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("trace distance equals half the Bloch separation", "[qubit-core]") {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector r1 = qsltest::random_bloch_in_ball(rng);
    const BlochVector r2 = qsltest::random_bloch_in_ball(rng);
    const double matrix_route =
        trace_distance(bloch_to_density(r1), bloch_to_density(r2));
    CHECK(matrix_route == Catch::Approx(0.5 * (r1 - r2).norm()).margin(1e-12));
  }
}

TEST_CASE("trace distance of the damped-JC pair follows b_t^2", "[qubit-core]") {
  // Propagate |0><0| and |1><1| numerically and compare against the analytic
  // amplitude factor.
  const double gamma0 = 0.3, lambda = 1.0;
  const GeneratorSpec spec = JaynesCummings{gamma0, lambda};
  PropagateOptions opts;
  opts.method = PropagationMethod::numeric;
  const double tau = 3.0;
  const auto up = propagate(spec, bloch_to_density({0, 0, 1}), tau, 4096, opts);
  const auto dn = propagate(spec, bloch_to_density({0, 0, -1}), tau, 4096, opts);
  for (double t : {0.3, 1.0, 2.2, 3.0}) {
    const double d = trace_distance(up.state_at(t), dn.state_at(t));
    const double b = jc_b(t, gamma0, lambda);
    CHECK(d == Catch::Approx(b * b).margin(1e-8));
  }
}

TEST_CASE("fidelity and Bures angle for aligned and orthogonal states",
          "[qubit-core]") {
  const PureState psi(0.3, 1.1);
  const auto self = fidelity_and_bures(psi, psi.density());
  CHECK(self.fidelity == Catch::Approx(1.0).margin(1e-14));
  CHECK(self.bures == Catch::Approx(0.0).margin(1e-7));

  // orthogonal partner as a density matrix
  const BlochVector r = psi.bloch();
  const auto perp = bloch_to_density(-r);
  const auto orth = fidelity_and_bures(psi, perp);
  CHECK(orth.fidelity == Catch::Approx(0.0).margin(1e-14));
  CHECK(orth.bures == Catch::Approx(std::asin(1.0)).margin(1e-14));
}

TEST_CASE("fidelity of the evolved excited state under the JC map is b_tau^2",
          "[qubit-core]") {
  const double gamma0 = 0.1, lambda = 1.0, tau = 2.5;
  const GeneratorSpec spec = JaynesCummings{gamma0, lambda};
  const PureState excited(1.0);
  const auto traj = propagate(spec, excited.density(), tau, 4096);
  const auto fb = fidelity_and_bures(excited, traj.state_at(tau));
  const double b = jc_b(tau, gamma0, lambda);
  CHECK(fb.fidelity == Catch::Approx(b * b).margin(1e-10));
}

TEST_CASE("sin^2 of the Bures angle complements the fidelity", "[qubit-core]") {
  Rng rng(37);
  for (int i = 0; i < 200; ++i) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const PureState psi(uni(rng), 6.28 * uni(rng));
    const DensityMatrix rho = qsltest::random_density(rng);
    const auto fb = fidelity_and_bures(psi, rho);
    const double s = std::sin(fb.bures);
    CHECK(s * s + fb.fidelity == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("norm triple on simple matrices", "[qubit-core]") {
  const auto sz = norm_triple(sigma_z());
  CHECK(sz.op == Catch::Approx(1.0));
  CHECK(sz.tr == Catch::Approx(2.0));
  CHECK(sz.hs == Catch::Approx(std::sqrt(2.0)));

  const auto zero = norm_triple(mat2_zero());
  CHECK(zero.op == 0.0);
  CHECK(zero.tr == 0.0);
  CHECK(zero.hs == 0.0);
}

TEST_CASE("norm ordering op <= hs <= tr on random matrices", "[qubit-core]") {
  Rng rng(53);
  for (int i = 0; i < 1000; ++i) {
    const auto n = norm_triple(qsltest::random_matrix(rng));
    CHECK(n.op <= n.hs + 1e-12);
    CHECK(n.hs <= n.tr + 1e-12);
  }
}

TEST_CASE("Hermitian traceless matrices have paired singular values",
          "[qubit-core]") {
  Rng rng(67);
  for (int i = 0; i < 1000; ++i) {
    const auto m = qsltest::random_hermitian_traceless(rng);
    const auto n = norm_triple(m);
    CHECK(n.tr == Catch::Approx(2.0 * n.op).margin(1e-10 * (1.0 + n.op)));
    CHECK(n.hs == Catch::Approx(std::sqrt(2.0) * n.op).margin(1e-10 * (1.0 + n.op)));
  }
}

TEST_CASE("pure states are projectors and orthogonal to their partner",
          "[qubit-core]") {
  Rng rng(79);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PureState psi(uni(rng), 6.28 * uni(rng));
    const auto eig = psi.density().eigenvalues();
    CHECK(std::abs(eig.first) <= 1e-12);
    CHECK(std::abs(eig.second - 1.0) <= 1e-12);
    // <psi|psi_perp> = 0
    const cplx overlap = std::conj(psi.amp_excited()) * psi.perp_amp_excited() +
                         std::conj(psi.amp_ground()) * psi.perp_amp_ground();
    CHECK(std::abs(overlap) <= 1e-14);
  }
  CHECK_THROWS_AS(PureState(1.5), ConfigError);
  CHECK_THROWS_AS(PureState(-0.1), ConfigError);
}
