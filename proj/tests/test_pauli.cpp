#include <doctest.h>

#include <cmath>

#include "surfsim/pauli.hpp"

using namespace surfsim;

namespace {

bool ptm_close(const Ptm& a, const Ptm& b, double tol = 1e-12) {
    if (a.dim() != b.dim()) return false;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (std::abs(a.at(i, j) - b.at(i, j)) > tol) return false;
    return true;
}

std::vector<CMat> amp_damp_kraus(double p1) {
    CMat k0(2), k1(2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p1);
    k1(0, 1) = std::sqrt(p1);
    return {k0, k1};
}

}  // namespace

TEST_CASE("identity Kraus gives identity PTM") {
    auto m = Ptm::from_kraus({CMat::identity(2)});
    CHECK(ptm_close(m, Ptm::identity(1)));
    CHECK(m.is_cptp());
}

TEST_CASE("Pauli X Kraus gives diag(1,1,-1,-1)") {
    auto m = Ptm::from_kraus({CMat::pauli(1)});
    Ptm want = Ptm::identity(1);
    want.at(2, 2) = -1.0;
    want.at(3, 3) = -1.0;
    CHECK(ptm_close(m, want));
}

TEST_CASE("amplitude damping PTM matches the trace-formula evaluation") {
    const double p1 = 0.37;
    auto m = Ptm::from_kraus(amp_damp_kraus(p1));
    // Entries derived by evaluating (1/2) Tr(sigma_i Lambda sigma_j) by hand.
    Ptm want(1);
    want.at(0, 0) = 1.0;
    want.at(1, 1) = std::sqrt(1.0 - p1);
    want.at(2, 2) = std::sqrt(1.0 - p1);
    want.at(3, 0) = p1;
    want.at(3, 3) = 1.0 - p1;
    CHECK(ptm_close(m, want));
    CHECK(ptm_close(m, Ptm::amplitude_damping(p1)));
    CHECK(m.is_cptp());
}

TEST_CASE("non-trace-preserving Kraus set is rejected") {
    CMat half = CMat::identity(2).scaled(0.5);
    CHECK_THROWS(Ptm::from_kraus({half}));
}

TEST_CASE("universal-NOT map fails the complete-positivity check") {
    Ptm m = Ptm::identity(1);
    m.at(1, 1) = -1.0;
    m.at(2, 2) = -1.0;
    m.at(3, 3) = -1.0;
    CHECK(m.trace_preserving());
    CHECK_FALSE(m.completely_positive());
}

TEST_CASE("twirl of amplitude damping") {
    const double p1 = 0.2;
    auto probs = Ptm::amplitude_damping(p1).twirl_probabilities();
    CHECK(probs[1] == doctest::Approx(p1 / 4).epsilon(1e-12));
    CHECK(probs[2] == doctest::Approx(p1 / 4).epsilon(1e-12));
    const double pz = (1.0 - std::sqrt(1.0 - p1)) / 2.0 - p1 / 4.0;
    CHECK(probs[3] == doctest::Approx(pz).epsilon(1e-9));
    double sum = probs[0] + probs[1] + probs[2] + probs[3];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two +pi/2 y rotations compose to the Y-conjugation PTM") {
    auto two = Ptm::ry(M_PI / 2).then(Ptm::ry(M_PI / 2));
    Ptm want = Ptm::identity(1);
    want.at(1, 1) = -1.0;
    want.at(3, 3) = -1.0;
    CHECK(ptm_close(two, want, 1e-12));
}

TEST_CASE("PTM composition matches sequential application order") {
    auto a = Ptm::amplitude_damping(0.3);
    auto b = Ptm::ry(0.7);
    auto c = Ptm::phase_damping(0.2);
    auto left = a.then(b).then(c);
    auto right = a.then(b.then(c));
    CHECK(ptm_close(left, right, 1e-13));
}

TEST_CASE("C-Z PTM is symmetric under qubit exchange") {
    auto cz = Ptm::cz_with_phases(0, 0, 0);
    for (int a1 = 0; a1 < 4; ++a1)
        for (int b1 = 0; b1 < 4; ++b1)
            for (int a2 = 0; a2 < 4; ++a2)
                for (int b2 = 0; b2 < 4; ++b2)
                    CHECK(cz.at(a1 * 4 + b1, a2 * 4 + b2) ==
                          doctest::Approx(cz.at(b1 * 4 + a1, b2 * 4 + a2)).epsilon(1e-12));
}

TEST_CASE("phase-errored C-Z equals the directly constructed unitary") {
    const double phi1 = M_PI, phi2 = M_PI / 2;
    auto got = Ptm::cz_with_phases(phi1, 0.0, phi2);
    CMat u(4);
    u(0, 0) = 1;
    u(1, 1) = 1;
    u(2, 2) = std::exp(cplx(0, phi1));
    u(3, 3) = std::exp(cplx(0, phi1 + M_PI + phi2));
    CHECK(ptm_close(got, Ptm::from_unitary(u), 1e-12));
    CHECK(got.is_cptp());
}

TEST_CASE("tensor of PTMs acts as both factors") {
    auto t = Ptm::tensor(Ptm::amplitude_damping(0.25), Ptm::phase_damping(0.5));
    CHECK(t.trace_preserving());
    CHECK(t.at(3 * 4 + 0, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.at(1, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}
