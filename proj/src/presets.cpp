#include "modelset/presets.hpp"

#include <cmath>

#include "modelset/errors.hpp"

namespace modelset {

namespace {

QuadraticNumber q(long long a_num, long long a_den, long long b_num, long long b_den, int d) {
    return QuadraticNumber(Rational(a_num, a_den), Rational(b_num, b_den), d);
}

}  // namespace

SchemeConfig preset_fibonacci() {
    const int D = 5;
    QuadraticNumber tau = q(1, 2, 1, 2, D);        // (1+sqrt5)/2
    QuadraticNumber tau_c = q(1, 2, -1, 2, D);     // (1-sqrt5)/2
    std::vector<Generator> basis;
    basis.push_back(Generator{{QuadraticNumber(1)}, {QuadraticNumber(1)}, 0});
    basis.push_back(Generator{{tau}, {tau_c}, 0});
    CutProjectScheme scheme(D, 1, 1, 1, std::move(basis));
    std::vector<Window> windows{
        Window::intervals(1, {IntervalSet::half_open(QuadraticNumber(0), QuadraticNumber(1))})};
    return SchemeConfig{"fibonacci", std::move(scheme), std::move(windows)};
}

SchemeConfig preset_silver_mean() {
    const int D = 2;
    QuadraticNumber lambda = q(1, 1, 1, 1, D);     // 1 + sqrt2
    QuadraticNumber lambda_c = q(1, 1, -1, 1, D);  // 1 - sqrt2
    std::vector<Generator> basis;
    basis.push_back(Generator{{QuadraticNumber(1)}, {QuadraticNumber(1)}, 0});
    basis.push_back(Generator{{lambda}, {lambda_c}, 0});
    CutProjectScheme scheme(D, 1, 1, 1, std::move(basis));
    std::vector<Window> windows{
        Window::intervals(1, {IntervalSet::half_open(QuadraticNumber(0), QuadraticNumber(1))})};
    return SchemeConfig{"silver-mean", std::move(scheme), std::move(windows)};
}

SchemeConfig preset_ammann_beenker() {
    const int D = 2;
    QuadraticNumber zero(0), one(1);
    QuadraticNumber s = q(0, 1, 1, 2, D);  // sqrt2 / 2
    // physical direction k*pi/4, internal star 3k*pi/4
    std::vector<Generator> basis;
    basis.push_back(Generator{{one, zero}, {one, zero}, 0});
    basis.push_back(Generator{{s, s}, {-s, s}, 0});
    basis.push_back(Generator{{zero, one}, {zero, -one}, 0});
    basis.push_back(Generator{{-s, s}, {s, s}, 0});
    CutProjectScheme scheme(D, 2, 2, 1, std::move(basis));

    // regular octagon with edge length 1, centred at the origin
    double a = (1 + std::sqrt(2.0)) / 2, b = 0.5;
    std::vector<Vec2> verts{{a, b},  {b, a},  {-b, a},  {-a, b},
                            {-a, -b}, {-b, -a}, {b, -a},  {a, -b}};
    std::vector<Window> windows{Window::polygons(1, {ConvexPolygon(std::move(verts))})};
    return SchemeConfig{"ammann-beenker", std::move(scheme), std::move(windows)};
}

SchemeConfig preset_redundant_k2() {
    const int D = 5;
    QuadraticNumber tau = q(1, 2, 1, 2, D);
    QuadraticNumber tau_c = q(1, 2, -1, 2, D);
    std::vector<Generator> basis;
    basis.push_back(Generator{{QuadraticNumber(1)}, {QuadraticNumber(1)}, 1});
    basis.push_back(Generator{{tau}, {tau_c}, 0});
    CutProjectScheme scheme(D, 1, 1, 2, std::move(basis));
    IntervalSet unit = IntervalSet::half_open(QuadraticNumber(0), QuadraticNumber(1));
    std::vector<Window> windows{Window::intervals(2, {unit, unit})};
    return SchemeConfig{"redundant-k2", std::move(scheme), std::move(windows)};
}

SchemeConfig preset_by_name(const std::string& name) {
    if (name == "fibonacci") return preset_fibonacci();
    if (name == "silver-mean") return preset_silver_mean();
    if (name == "ammann-beenker") return preset_ammann_beenker();
    if (name == "redundant-k2") return preset_redundant_k2();
    throw ConfigError("unknown preset: " + name);
}

}  // namespace modelset
