#include <cmath>

#include <gtest/gtest.h>

#include "treadmill/diffusion.hpp"

using namespace treadmill;

namespace {

SteadyProfiles sample_profiles() {
    SteadyProfiles p;
    p.r0 = 1.0;
    p.r1 = 1.6;
    p.V0 = 0.8;
    p.V1 = -0.3;
    p.mu0 = 0.4;
    p.transport = TransportParams{0.7, 1.9, 1.3, 2.2};
    return p;
}

}  // namespace

TEST(Flux, ValuesAndJump) {
    EXPECT_DOUBLE_EQ(flux(1.0, 1.0, -1.0, 1.0, 2.0, 1.0), -1.0);
    EXPECT_DOUBLE_EQ(flux(2.0, 1.0, -1.0, 1.0, 2.0, 1.0, Side::below), -0.25);
    EXPECT_EQ(flux(2.0, 1.0, -1.0, 1.0, 2.0, 1.0, Side::above), 0.0);
    EXPECT_EQ(flux(7.0, 1.0, -1.0, 1.0, 2.0, 1.0), 0.0);

    const auto p = sample_profiles();
    const double jump = p.flux(p.r1, Side::above) - p.flux(p.r1, Side::below);
    const double q = p.r0 / p.r1;
    EXPECT_NEAR(jump, -q * q * p.transport.rhoR * p.V1, 1e-15);
}

TEST(Flux, DivergenceFree) {
    const auto p = sample_profiles();
    const double inner = p.flux(p.r0) * p.r0 * p.r0;
    for (double r : {1.0, 1.1, 1.3, 1.59}) EXPECT_NEAR(p.flux(r) * r * r, inner, 1e-14);
    const double outer = p.flux(p.r1, Side::above) * p.r1 * p.r1;
    for (double r : {1.6, 2.0, 10.0, 1e4}) EXPECT_NEAR(p.flux(r, Side::above) * r * r, outer, 1e-14);
}

TEST(Flux, RejectsBadGeometry) {
    EXPECT_THROW(flux(0.5, 1.0, 0.0, 1.0, 2.0, 1.0), DomainError);
    EXPECT_THROW(flux(1.5, 1.0, 0.0, 1.0, 0.9, 1.0), DomainError);
    EXPECT_THROW(flux(1.5, 1.0, 0.0, 0.0, 2.0, 1.0), DomainError);
}

TEST(ChemicalPotential, BoundaryValues) {
    const auto p = sample_profiles();
    EXPECT_EQ(p.chemical_potential(p.r0), p.mu0);
    EXPECT_NEAR(chemical_potential(1e12, p), p.transport.mu_inf, 1e-11);
    EXPECT_THROW(p.chemical_potential(0.9), DomainError);
}

TEST(ChemicalPotential, SatisfiesFicksLaw) {
    const auto p = sample_profiles();
    for (double r : {1.05, 1.3, 1.55, 1.7, 3.0, 40.0}) {
        const double h = 1e-6 * r;
        const double dmu = (p.chemical_potential(r + h) - p.chemical_potential(r - h)) / (2 * h);
        const double M = r < p.r1 ? p.transport.M_inner : p.transport.M_outer;
        EXPECT_NEAR(p.flux(r, Side::above), -M * dmu, 1e-7 * (1 + std::abs(dmu))) << r;
    }
}

TEST(ChemicalPotential, UniformOutsideWhenTreadmilling) {
    auto p = sample_profiles();
    p.V1 = -p.V0;
    for (double r : {1.6, 2.0, 100.0}) EXPECT_EQ(p.chemical_potential(r), p.transport.mu_inf);
    EXPECT_EQ(p.flux(5.0), 0.0);
}

TEST(ChemicalPotential, NondecreasingForInwardFlow) {
    const auto p = sample_profiles();
    double prev = p.chemical_potential(p.r0);
    for (int i = 1; i <= 400; ++i) {
        const double r = p.r0 + i * 0.01;
        const double mu = p.chemical_potential(r);
        EXPECT_GE(mu, prev) << r;
        prev = mu;
    }
}

TEST(Interface, NoFlowStateBalances) {
    const TransportParams tp{1.0, 2.0, 1.0, 0.75};
    const InterfaceState s{1.5, 0.0, 0.0, 0.75, 0.75};
    const auto res = interface_residuals(s, tp, 1.0);
    EXPECT_EQ(res.inner.value, 0.0);
    EXPECT_EQ(res.outer.value, 0.0);
}

TEST(Interface, ConsistentWithProfiles) {
    // mu1 taken from the inner closed form; outer condition then fixes V1.
    const auto p = sample_profiles();
    const auto& tp = p.transport;
    const double mu1 = p.mu0 + tp.rhoR * p.r0 * p.V0 / tp.M_inner * (1 - p.r0 / p.r1);
    const double V1 = tp.M_outer * (tp.mu_inf - mu1) * p.r1 / (p.r0 * p.r0) / tp.rhoR - p.V0;
    const auto res = interface_residuals(InterfaceState{p.r1, p.V0, V1, p.mu0, mu1}, tp, p.r0);
    EXPECT_LT(res.inner.relative(), 1e-14);
    EXPECT_LT(res.outer.relative(), 1e-14);
}

TEST(Interface, LinearInInnerPotential) {
    const TransportParams tp{0.6, 1.0, 1.0, 1.0};
    const InterfaceState s{2.5, 0.3, -0.3, 0.2, 0.9};
    const double r0 = 1.5;
    auto shifted = s;
    const double delta = 0.125;
    shifted.mu0 += delta;
    const double change = interface_residuals(shifted, tp, r0).inner.value - interface_residuals(s, tp, r0).inner.value;
    EXPECT_NEAR(change, tp.M_inner * delta * s.r1 / ((s.r1 - r0) * r0), 1e-14);
}

TEST(Interface, RejectsDegenerateShell) {
    const TransportParams tp;
    EXPECT_THROW(interface_residuals(InterfaceState{1.0, 0.0, 0.0, 0.0, 0.0}, tp, 1.0), DomainError);
    EXPECT_THROW((TransportParams{0.0, 1.0, 1.0, 0.0}.check()), DomainError);
    EXPECT_NO_THROW(tp.check());
}
