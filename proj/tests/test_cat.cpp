#include <catch2/catch_amalgamated.hpp>

#include "qecov/cat.hpp"
#include "qecov/fock.hpp"
#include "test_helpers.hpp"

using namespace qecov;
using namespace qecov::cat;
using Catch::Approx;

namespace {
const double kPi = 3.14159265358979323846;

// Fock-space reference for the two-dimensional cat channel: embed the state,
// apply the damping Kraus operators, and read the output back in the
// orthogonal basis at the shrunk amplitude.
Mat2 fock_lossy_reference(const Mat2& rho_uv, double alpha, double gamma, double* leak = nullptr) {
    const int dim = fock::coherent_dim_for(alpha);
    auto cat_pair = [&](double a) {
        const Vec plus = fock::coherent_vector(a, dim).amplitudes;
        const Vec minus = fock::coherent_vector(-a, dim).amplitudes;
        Vec u = plus + minus, v = plus - minus;
        u.normalize();
        v.normalize();
        return std::pair<Vec, Vec>{u, v};
    };
    auto [u, v] = cat_pair(alpha);
    Mat rho = Mat::Zero(dim, dim);
    const std::array<Vec, 2> b = {u, v};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rho += rho_uv(i, j) * (b[i] * b[j].adjoint());
    const Mat out =
        fock::apply_channel({{dim}, rho}, {fock::damping_kraus(gamma, dim)}).matrix;
    auto [up, vp] = cat_pair(std::sqrt(1.0 - gamma) * alpha);
    const std::array<Vec, 2> bp = {up, vp};
    Mat2 out_uv;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out_uv(i, j) = bp[i].dot(out * bp[j]);
    if (leak) {
        Mat recon = Mat::Zero(dim, dim);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) recon += out_uv(i, j) * (bp[i] * bp[j].adjoint());
        *leak = (out - recon).cwiseAbs().maxCoeff();
    }
    return out_uv;
}

Mat2 logical_projector(const CatInput& q) {
    Eigen::Vector2cd psi;
    psi << std::sqrt(q.w), std::polar(std::sqrt(1.0 - q.w), q.theta);
    return psi * psi.adjoint();
}
}  // namespace

TEST_CASE("CatBasis", "[cat]") {
    for (double a : {0.0, 0.3, 1.0, 2.5}) {
        const auto b = CatBasis::make(a);
        CHECK(b.mu * b.mu + b.nu * b.nu == Approx(1.0).margin(1e-12));
        CHECK(b.mu * b.mu - b.nu * b.nu == Approx(std::exp(-2.0 * a * a)).margin(1e-12));
    }
    SECTION("frame/basis conversion is an exact inverse pair") {
        std::mt19937_64 rng(8);
        const auto b = CatBasis::make(1.1);
        for (int it = 0; it < 10; ++it) {
            const Mat2 rho = test::random_density(2, rng).topLeftCorner<2, 2>();
            const Mat2 back = detail::uv_from_frame(detail::frame_from_uv(rho, b), b);
            CHECK((back - rho).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("lossy_cat_mode", "[cat]") {
    SECTION("gamma=0 is the identity") {
        std::mt19937_64 rng(9);
        const Mat2 rho = test::random_density(2, rng).topLeftCorner<2, 2>();
        const auto out = lossy_cat_mode(rho, 1.3, 0.0);
        CHECK(out.alpha_out == Approx(1.3));
        CHECK((out.rho - rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("coherent states stay coherent") {
        const double a = 1.2, g = 0.4;
        const auto b = CatBasis::make(a);
        Eigen::Vector2cd alpha_uv;
        alpha_uv << b.mu, b.nu;  // |alpha> in {u, v}
        const auto out = lossy_cat_mode(alpha_uv * alpha_uv.adjoint(), a, g);
        const auto bp = CatBasis::make(out.alpha_out);
        Eigen::Vector2cd expect;
        expect << bp.mu, bp.nu;
        CHECK((out.rho - expect * expect.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(out.alpha_out == Approx(std::sqrt(1.0 - g) * a));
    }
    SECTION("even cat coherence decays by exp(-2 gamma alpha^2)") {
        const double a = 1.0, g = 0.32;
        Mat2 even = Mat2::Zero();
        even(0, 0) = 1.0;  // |u><u|
        const auto out = lossy_cat_mode(even, a, g);
        const Mat2 frame = detail::frame_from_uv(out.rho, CatBasis::make(out.alpha_out));
        // populations half/half, coherence kappa/2
        const double kappa = std::exp(-2.0 * g * a * a);
        CHECK(frame(0, 0).real() == Approx(0.5).margin(1e-10));
        CHECK(frame(0, 1).real() == Approx(0.5 * kappa).margin(1e-10));
        // and the Fock simulation agrees
        double leak = 0.0;
        const Mat2 ref = fock_lossy_reference(even, a, g, &leak);
        CHECK(leak < 1e-9);
        CHECK((out.rho - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("matches the Fock oracle on random states") {
        std::mt19937_64 rng(10);
        for (double a : {0.5, 2.0})
            for (double g : {0.1, 0.32, 0.6}) {
                const Mat2 rho = test::random_density(2, rng).topLeftCorner<2, 2>();
                const Mat2 ref = fock_lossy_reference(rho, a, g);
                const auto out = lossy_cat_mode(rho, a, g);
                INFO("alpha=" << a << " gamma=" << g);
                REQUIRE((out.rho - ref).cwiseAbs().maxCoeff() < 1e-8);
            }
    }
}

TEST_CASE("cat_direct_pipeline", "[cat]") {
    SECTION("alpha=0 collapses every input to the vacuum") {
        const Mat2 o1 = cat_direct_pipeline(0.0, 0.32, {0.2, 1.0, 0.0});
        const Mat2 o2 = cat_direct_pipeline(0.0, 0.32, {0.9, 2.5, 0.0});
        CHECK(measures::fidelity_2x2(o1, o2) == Approx(1.0).margin(1e-12));
        CHECK(o1(0, 0).real() == Approx(1.0));
    }
    SECTION("outputs of |alpha> and |-alpha> overlap as exp(-2(1-g)a^2)") {
        for (double a : {0.8, 1.5})
            for (double g : {0.1, 0.32}) {
                const Mat2 out_minus = cat_direct_pipeline(a, g, {1.0, 0.0, a});
                const Mat2 out_plus = cat_direct_pipeline(a, g, {0.0, 0.0, a});
                const double f = measures::fidelity_2x2(out_minus, out_plus);
                CHECK(f == Approx(std::exp(-2.0 * (1.0 - g) * a * a)).margin(1e-9));
            }
    }
    SECTION("normalization constant matches the physical norm") {
        const CatInput q{0.3, 0.8, 1.1};
        const double n = cat_norm_constant(q);
        // <Q|Q> with raw amplitudes sqrt(w), e^{i th} sqrt(1-w) equals N
        const double e = std::exp(-2.0 * q.alpha * q.alpha);
        const double raw = 1.0 + 2.0 * std::sqrt(q.w * (1.0 - q.w)) * std::cos(q.theta) * e;
        CHECK(n == Approx(raw).margin(1e-14));
        // pipeline output is a valid state
        const Mat2 out = cat_direct_pipeline(q.alpha, 0.25, q);
        CHECK(fock::check_density(out).ok);
    }
}

TEST_CASE("gvr_pipeline", "[cat]") {
    SECTION("even mode counts are rejected") {
        CHECK_THROWS_AS(gvr_pipeline({2, 1.0}, 0.1, {0.5, 0.0, 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(cat_concurrence({4, 1.0}, 0.1), std::invalid_argument);
    }
    SECTION("gamma=0 recovers the logical state perfectly for any N") {
        for (int n : {1, 3, 5, 11}) {
            const CatInput q{0.3, 1.2, 1.4};
            const Mat2 out = gvr_pipeline({n, q.alpha}, 0.0, q);
            CHECK((out - logical_projector(q)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SECTION("N=1 is the bare phase-flip channel in the conjugate basis") {
        const CatInput q{0.7, 0.4, 1.2};
        const double g = 0.32;
        const double p = flip_probability(q.alpha, g);
        const Mat2 pure = logical_projector(q);
        Mat2 x_pure;
        x_pure << pure(1, 1), pure(1, 0), pure(0, 1), pure(0, 0);
        const Mat2 expect = (1.0 - p) * pure + p * x_pure;
        CHECK((gvr_pipeline({1, q.alpha}, g, q) - expect).cwiseAbs().maxCoeff() < 1e-13);
    }
    SECTION("N=3 residual flip equals the eight-pattern enumeration") {
        const double p = flip_probability(1.5, 0.32);
        // enumerate all 2^3 flip patterns; majority vote fails on >= 2 flips
        double p_fail = 0.0;
        for (int pattern = 0; pattern < 8; ++pattern) {
            const int flips = __builtin_popcount(unsigned(pattern));
            const double prob = std::pow(p, flips) * std::pow(1.0 - p, 3 - flips);
            if (flips >= 2) p_fail += prob;
        }
        CHECK(residual_flip_probability(3, p) == Approx(p_fail).margin(1e-15));
        CHECK(p_fail ==
              Approx(3.0 * p * p * (1.0 - p) + p * p * p).margin(1e-15));
        // and the pipeline mixes exactly that weight onto the flipped state
        const CatInput q{1.0, 0.0, 1.5};
        const Mat2 out = gvr_pipeline({3, q.alpha}, 0.32, q);
        CHECK(out(1, 1).real() == Approx(1.0 - p_fail).margin(1e-13));
        CHECK(out(0, 0).real() == Approx(p_fail).margin(1e-13));
    }
    SECTION("redundancy helps whenever p < 1/2") {
        const double p = flip_probability(2.0, 0.32);
        REQUIRE(p < 0.5);
        double prev = residual_flip_probability(1, p);
        for (int n : {3, 5, 11}) {
            const double cur = residual_flip_probability(n, p);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SECTION("gate-error hook folds into the per-mode flip probability") {
        const CatInput q{0.4, 0.9, 1.0};
        const double g = 0.2, pg = 0.07;
        GateErrorModel model{[pg](double, int) { return pg; }};
        const double p = flip_probability(q.alpha, g);
        const double p_eff = p * (1.0 - pg) + pg * (1.0 - p);
        const Mat2 pure = logical_projector(q);
        Mat2 x_pure;
        x_pure << pure(1, 1), pure(1, 0), pure(0, 1), pure(0, 0);
        const Mat2 expect = (1.0 - p_eff) * pure + p_eff * x_pure;
        CHECK((gvr_pipeline({1, q.alpha}, g, q, &model) - expect).cwiseAbs().maxCoeff() <
              1e-13);
    }
}

TEST_CASE("cat_concurrence", "[cat]") {
    SECTION("gamma=0 keeps maximal entanglement at any alpha") {
        for (double a : {0.2, 1.0, 2.4})
            for (int n : {1, 3})
                CHECK(cat_concurrence({n, a}, 0.0) == Approx(1.0).margin(1e-12));
    }
    SECTION("direct transmission decays as exp(-2 gamma alpha^2)") {
        const double g = 0.32;
        for (double a : {0.3, 1.0, 2.0}) {
            const double expect = std::exp(-2.0 * g * a * a);
            CHECK(cat_concurrence({1, a}, g) == Approx(expect).margin(1e-10));
        }
    }
    SECTION("direct concurrence approaches 1 as alpha -> 0 at fixed loss") {
        CHECK(cat_concurrence({1, 0.05}, 0.32) > 0.99);
        CHECK(cat_concurrence({1, 0.05}, 0.32) > cat_concurrence({1, 0.2}, 0.32));
    }
    SECTION("repetition beats direct for every alpha") {
        for (double a : {0.5, 1.0, 2.0, 3.0})
            CHECK(cat_concurrence({3, a}, 0.32) > cat_concurrence({1, a}, 0.32));
    }
    SECTION("brute-force two-qubit oracle") {
        // rebuild the mixed two-qubit output by hand and apply the direct
        // non-Hermitian eigenvalue route
        const double a = 1.3, g = 0.4;
        const double p = residual_flip_probability(3, flip_probability(a, g));
        Eigen::Vector4cd psi = Eigen::Vector4cd::Zero(), chi = Eigen::Vector4cd::Zero();
        psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
        chi(0) = chi(3) = 1.0 / std::sqrt(2.0);
        const Mat4 rho = (1.0 - p) * psi * psi.adjoint() + p * chi * chi.adjoint();
        Mat4 yy = Mat4::Zero();
        yy(0, 3) = -1.0;
        yy(1, 2) = 1.0;
        yy(2, 1) = 1.0;
        yy(3, 0) = -1.0;
        Eigen::ComplexEigenSolver<Mat4> es(rho * (yy * rho.conjugate() * yy));
        Eigen::Vector4d lam = es.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
        std::sort(lam.data(), lam.data() + 4);
        const double expect = std::max(0.0, lam(3) - lam(2) - lam(1) - lam(0));
        CHECK(cat_concurrence({3, a}, g) == Approx(expect).margin(1e-10));
    }
}

TEST_CASE("cat_codeword_overlap", "[cat]") {
    SECTION("repetition codes start from orthogonal logical pairs at gamma=0") {
        for (int n : {3, 5})
            CHECK(cat_codeword_overlap({n, 1.2}, 0.0).value <= 1e-9);
    }
    SECTION("direct transmission becomes indistinguishable as alpha -> 0") {
        CHECK(cat_codeword_overlap({1, 0.0}, 0.32).value == Approx(1.0).margin(1e-12));
        const double f_small = cat_codeword_overlap({1, 0.05}, 0.32).value;
        CHECK(f_small > 0.99);
        CHECK(f_small > cat_codeword_overlap({1, 0.4}, 0.32).value);
    }
    SECTION("direct keeps a finite overlap at gamma=0 from the alphabet itself") {
        const double f = cat_codeword_overlap({1, 1.0}, 0.0).value;
        CHECK(f > 1e-3);
        CHECK(f < 0.5);
    }
    SECTION("more redundancy lowers the overlap at fixed alpha") {
        const double g = 0.32;
        for (double a : {1.5, 2.5}) {
            const double f3 = cat_codeword_overlap({3, a}, g).value;
            const double f5 = cat_codeword_overlap({5, a}, g).value;
            const double f11 = cat_codeword_overlap({11, a}, g).value;
            CHECK(f5 < f3);
            CHECK(f11 < f5);
        }
    }
}
