#include "simustab/fixtures.hpp"

namespace simustab {

namespace {

RationalFunction rf(std::vector<double> num, std::vector<double> den) {
    return RationalFunction(Polynomial(std::move(num)), Polynomial(std::move(den)));
}

RationalFunction c(double v) { return RationalFunction::constant(v); }

}  // namespace

PlantPair example1_plants() {
    RationalMatrix N0(2, 2), D0(2, 2), N1(2, 2), D1(2, 2);
    N0.at(0, 0) = c(1);
    N0.at(0, 1) = c(2);
    N0.at(1, 0) = c(3);
    N0.at(1, 1) = c(1);

    D0.at(0, 0) = rf({-2, 1}, {6, 1});
    D0.at(0, 1) = c(1);
    D0.at(1, 0) = c(3);
    D0.at(1, 1) = rf({-2.7, 1}, {10, 1});

    N1.at(0, 0) = c(1);
    N1.at(0, 1) = c(2);
    N1.at(1, 0) = c(4);
    N1.at(1, 1) = c(3);

    D1.at(0, 0) = rf({-3.2, 1}, {2.2, 1});
    D1.at(0, 1) = c(1);
    D1.at(1, 0) = c(6);
    D1.at(1, 1) = rf({-7.7, 1}, {1, 1});

    return make_plant_pair(std::move(N0), std::move(D0), std::move(N1), std::move(D1));
}

PlantPair example2_plants() {
    const std::vector<double> q10 = {10, 2, 1};
    const std::vector<double> q15 = {15, 2, 1};

    RationalMatrix N0(2, 2), D0(2, 2), N1(2, 2), D1(2, 2);
    N0.at(0, 0) = rf({3, -6, 3}, q10);    // 3(s-1)^2
    N0.at(0, 1) = c(5);
    N0.at(1, 0) = c(4);
    N0.at(1, 1) = rf({16, -12, 2}, q10);  // 2(s-4)(s-2)

    D0.at(0, 0) = rf({12, -10, 2}, q10);  // 2(s-2)(s-3)
    D0.at(0, 1) = c(-1);
    D0.at(1, 0) = c(3);
    D0.at(1, 1) = rf({4, -4, 1}, q10);    // (s-2)^2

    N1.at(0, 0) = rf({-1, 0, 1}, q15);    // (s-1)(s+1)
    N1.at(0, 1) = c(6);
    N1.at(1, 0) = c(7);
    N1.at(1, 1) = rf({8, -9, 1}, q15);    // (s-8)(s-1)

    D1.at(0, 0) = rf({-12, -4, 1}, q15);  // (s-6)(s+2)
    D1.at(0, 1) = c(2);
    D1.at(1, 0) = c(-1);
    D1.at(1, 1) = rf({135, -42, 3}, q15); // 3(s-5)(s-9)

    return make_plant_pair(std::move(N0), std::move(D0), std::move(N1), std::move(D1));
}

std::optional<Eigen::MatrixXd> sigma_preset(const std::string& name) {
    Eigen::MatrixXd m;
    if (name == "example1") {
        m.resize(2, 2);
        m << 0.3, 0.0, 0.0, 0.5;
    } else if (name == "a") {
        m.resize(2, 2);
        m << -0.1, -0.9, 0.4, -0.6;
    } else if (name == "b") {
        m.resize(2, 2);
        m << 0.4, 0.1, 0.5, 0.4;
    } else if (name == "c") {
        m.resize(2, 2);
        m << 0.2, 0.35, 0.6, 0.4;
    } else if (name == "d") {
        m.resize(2, 2);
        m << -0.8, 0.1, 0.6, -0.2;
    } else if (name == "e") {
        m.resize(2, 2);
        m << -0.65, 0.22, 0.8, -0.2;
    } else if (name == "f") {
        m.resize(2, 2);
        m << 0.8, -0.33, 0.9, 0.7;
    } else if (name == "example2") {
        m.resize(4, 2);
        m << 0.4, 0.2, 0.3, -0.5, 0.8, -0.1, 0.6, -0.2;
    } else {
        return std::nullopt;
    }
    return m;
}

std::vector<std::string> sigma_preset_names() {
    return {"example1", "a", "b", "c", "d", "e", "f", "example2"};
}

}  // namespace simustab
