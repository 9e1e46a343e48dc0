#pragma once

// 1D Swift-Hohenberg toys solved by Newton from a Gaussian seed.

#include "spectral/certify.hpp"

namespace testsupport {

struct Toy {
    spectral::ModelDescriptor model;
    spectral::FourierSeq U0;
};

inline Toy make_toy(double mu = 1.0, double nu1 = -3.0, double nu2 = 1.0, double d = 20.0, int N = 32, double amp = 1.5,
                    double width = 2.0) {
    using namespace spectral;
    ModelDescriptor md = sh_model(Interval(mu), Interval(nu1), Interval(nu2), 1);
    GridSpec g{1, N, d};
    FourierSeq seed = make_seed({"gaussian", amp, width, ""}, g, Sector::parse("c", 1));
    return {md, newton_solve(md, seed).U0};
}

// mu = 1, nu1 = -3, nu2 = 1 on (-20, 20) with N = 32
inline const Toy& standard_toy() {
    static const Toy t = make_toy();
    return t;
}

}  // namespace testsupport
