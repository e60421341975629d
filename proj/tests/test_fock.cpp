#include <catch2/catch_amalgamated.hpp>

#include "qecov/fock.hpp"
#include "test_helpers.hpp"

using namespace qecov;
using namespace qecov::fock;
using Catch::Approx;

TEST_CASE("damping_kraus basics", "[fock]") {
    SECTION("lossless channel is the identity") {
        auto set = damping_kraus(0.0, 2);
        REQUIRE(set.operators.size() == 2);
        CHECK((set.operators[0] - Mat::Identity(2, 2)).norm() == 0.0);
        CHECK(set.operators[1].norm() == 0.0);
    }
    SECTION("qubit entries") {
        const double g = 0.37;
        auto set = damping_kraus(g, 2);
        CHECK(set.operators[1](0, 1).real() == Approx(std::sqrt(g)).epsilon(1e-14));
        CHECK(set.operators[0](1, 1).real() == Approx(std::sqrt(1.0 - g)).epsilon(1e-14));
        CHECK(set.operators[0](0, 0).real() == Approx(1.0).epsilon(1e-14));
    }
    SECTION("completeness at gamma=0.3, dim=5") {
        auto set = damping_kraus(0.3, 5);
        Mat sum = Mat::Zero(5, 5);
        for (const auto& a : set.operators) sum += a.adjoint() * a;
        CHECK((sum - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("completeness over the gamma grid, dims up to 8") {
        for (int dim = 1; dim <= 8; ++dim) {
            for (int i = 0; i <= 10; ++i) {
                const double g = 0.1 * i;
                auto set = damping_kraus(g, dim);
                Mat sum = Mat::Zero(dim, dim);
                for (const auto& a : set.operators) sum += a.adjoint() * a;
                REQUIRE((sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    SECTION("parameter errors") {
        CHECK_THROWS_AS(damping_kraus(-0.1, 2), std::invalid_argument);
        CHECK_THROWS_AS(damping_kraus(1.1, 2), std::invalid_argument);
        CHECK_THROWS_AS(damping_kraus(0.5, 0), std::invalid_argument);
    }
}

TEST_CASE("apply_channel", "[fock]") {
    SECTION("single photon decays to (1-g)|1><1| + g|0><0|") {
        const double g = 0.42;
        DensityOp rho = DensityOp::from_pure(basis_ket({2}, {1}));
        DensityOp out = apply_channel(rho, {damping_kraus(g, 2)});
        Mat expect = Mat::Zero(2, 2);
        expect(0, 0) = g;
        expect(1, 1) = 1.0 - g;
        CHECK((out.matrix - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("gamma=0 leaves the state unchanged") {
        std::mt19937_64 rng(7);
        DensityOp rho{{2, 2}, test::random_density(4, rng)};
        DensityOp out = apply_channel(rho, {damping_kraus(0.0, 2), damping_kraus(0.0, 2)});
        CHECK((out.matrix - rho.matrix).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("|01> keeps one photon with probability 1-g") {
        // oracle: enumerate the four Kraus branches by hand
        const double g = 0.23;
        auto set = damping_kraus(g, 2);
        const Vec psi = basis_ket({2, 2}, {0, 1}).amplitudes;
        double p_one_photon = 0.0;
        for (int k1 = 0; k1 < 2; ++k1)
            for (int k2 = 0; k2 < 2; ++k2) {
                Vec out = kron(set.operators[k1], set.operators[k2]) * psi;
                p_one_photon += std::norm(out(1)) + std::norm(out(2));
            }
        CHECK(p_one_photon == Approx(1.0 - g).epsilon(1e-13));

        DensityOp out =
            apply_channel(DensityOp::from_pure(basis_ket({2, 2}, {0, 1})), {set, set});
        CHECK((out.matrix(1, 1) + out.matrix(2, 2)).real() == Approx(1.0 - g).epsilon(1e-13));
    }
    SECTION("dimension mismatch raises") {
        DensityOp rho{{2, 2}, Mat::Identity(4, 4) / 4.0};
        CHECK_THROWS_AS(apply_channel(rho, {damping_kraus(0.1, 2)}), std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(rho, {damping_kraus(0.1, 2), damping_kraus(0.1, 3)}),
                        std::invalid_argument);
    }
}

TEST_CASE("tensor and partial_trace", "[fock]") {
    SECTION("|0> x |1> = |01>") {
        auto v = tensor(basis_ket({2}, {0}), basis_ket({2}, {1}));
        REQUIRE(v.mode_dims == std::vector<int>{2, 2});
        CHECK(v.amplitudes(1) == Complex(1.0));
        CHECK(v.amplitudes.norm() == Approx(1.0));
    }
    SECTION("(a I2) x I2 = a I4") {
        DensityOp a{{2}, 0.5 * Mat::Identity(2, 2)};
        DensityOp b{{2}, Mat::Identity(2, 2)};
        auto t = tensor(a, b);
        CHECK((t.matrix - 0.5 * Mat::Identity(4, 4)).norm() == 0.0);
    }
    SECTION("dims concatenate") {
        auto v = tensor(basis_ket({2}, {1}), basis_ket({3}, {2}));
        CHECK(v.mode_dims == std::vector<int>{2, 3});
        CHECK(v.dim() == 6);
    }
    SECTION("half of a Bell pair is maximally mixed") {
        Vec bell = (basis_ket({2, 2}, {0, 0}).amplitudes +
                    basis_ket({2, 2}, {1, 1}).amplitudes) /
                   std::sqrt(2.0);
        DensityOp rho{{2, 2}, bell * bell.adjoint()};
        auto red = partial_trace(rho, {0});
        CHECK((red.matrix - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("product state factors recover") {
        std::mt19937_64 rng(3);
        Mat a = test::random_density(2, rng), b = test::random_density(3, rng);
        DensityOp rho{{2, 3}, kron(a, b)};
        CHECK((partial_trace(rho, {0}).matrix - a).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((partial_trace(rho, {1}).matrix - b).cwiseAbs().maxCoeff() < 1e-13);
    }
    SECTION("keeping all modes is a no-op") {
        std::mt19937_64 rng(5);
        DensityOp rho{{2, 2}, test::random_density(4, rng)};
        auto out = partial_trace(rho, {0, 1});
        CHECK((out.matrix - rho.matrix).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("bad index raises") {
        DensityOp rho{{2}, Mat::Identity(2, 2) / 2.0};
        CHECK_THROWS_AS(partial_trace(rho, {1}), std::invalid_argument);
        CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
    }
}

TEST_CASE("coherent_vector", "[fock]") {
    SECTION("alpha=0 is the vacuum") {
        auto v = coherent_vector(0.0, 4);
        CHECK(v.amplitudes(0) == Complex(1.0));
        CHECK(v.amplitudes.tail(3).norm() == 0.0);
    }
    SECTION("norm is one") {
        auto v = coherent_vector(Complex(1.3, 0.4), coherent_dim_for(std::abs(Complex(1.3, 0.4))));
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);
    }
    SECTION("<alpha|-alpha> = exp(-2|alpha|^2)") {
        for (double a : {0.5, 1.0, 2.0, 3.0}) {
            const int dim = coherent_dim_for(a);
            auto plus = coherent_vector(a, dim);
            auto minus = coherent_vector(-a, dim);
            const Complex ov = plus.amplitudes.dot(minus.amplitudes);
            CHECK(std::abs(ov - std::exp(-2.0 * a * a)) < 1e-9);
        }
    }
    SECTION("undersized truncation reports the required dim") {
        try {
            coherent_vector(3.0, 10);
            FAIL("expected TruncationError");
        } catch (const TruncationError& e) {
            CHECK(e.required_dim == coherent_dim_for(3.0));
        }
    }
}

TEST_CASE("channel invariants", "[fock][property]") {
    std::mt19937_64 rng(11);
    SECTION("trace preservation and positivity on random states") {
        for (int it = 0; it < 20; ++it) {
            const double g = 0.05 + 0.9 * (it / 19.0);
            DensityOp rho{{4}, test::random_density(4, rng)};
            DensityOp out = apply_channel(rho, {damping_kraus(g, 4)});
            CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-9);
            CHECK(min_eigenvalue(out.matrix) > -1e-9);
            CHECK(fock::check_density(out.matrix).ok);
        }
    }
    SECTION("loss composes as a semigroup") {
        // damping g1 then g2 equals damping 1-(1-g1)(1-g2)
        for (auto [g1, g2] : {std::pair{0.1, 0.2}, {0.4, 0.35}, {0.0, 0.7}, {0.9, 0.6}}) {
            DensityOp rho{{5}, test::random_density(5, rng)};
            DensityOp two_step =
                apply_channel(apply_channel(rho, {damping_kraus(g1, 5)}), {damping_kraus(g2, 5)});
            const double g12 = 1.0 - (1.0 - g1) * (1.0 - g2);
            DensityOp one_step = apply_channel(rho, {damping_kraus(g12, 5)});
            CHECK((two_step.matrix - one_step.matrix).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}
