#include "qwec/json_io.hpp"

namespace qwec {

namespace {

using nlohmann::json;

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json mat2_json(const Mat2& m) {
    return json::array({json::array({cplx_json(m(0, 0)), cplx_json(m(0, 1))}),
                        json::array({cplx_json(m(1, 0)), cplx_json(m(1, 1))})});
}

Mat2 mat2_from(const json& j) {
    Mat2 m;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = cplx_from(j.at(r).at(c));
    return m;
}

json pair_json(const std::array<cplx, 2>& a) { return json::array({cplx_json(a[0]), cplx_json(a[1])}); }

std::array<cplx, 2> pair_from(const json& j) { return {cplx_from(j.at(0)), cplx_from(j.at(1))}; }

json signs_json(const Signs& s) { return json(std::vector<int>(s.begin(), s.end())); }

}  // namespace

json to_json(const ErrorSpec& spec) {
    json j;
    j["family"] = std::string(family_name(spec.family()));
    j["target"] = std::string(particle_name(spec.target));
    json params;
    if (const auto* c = std::get_if<CoinError>(&spec.model)) {
        for (Vertex v : kClockwise) params["blocks"][vertex_label(v)] = mat2_json(c->blocks[code(v)]);
    } else if (const auto* s = std::get_if<ShiftError>(&spec.model)) {
        params["alpha"] = pair_json(s->alpha);
        params["beta"] = pair_json(s->beta);
        params["gamma"] = pair_json(s->gamma);
    } else {
        params["word"] = std::get<PauliFlip>(spec.model).word.render();
    }
    j["parameters"] = params;
    return j;
}

ErrorSpec error_from_json(const json& j) {
    ErrorSpec spec;
    spec.target = parse_particle(j.at("target").get<std::string>());
    const json& p = j.at("parameters");
    switch (parse_family(j.at("family").get<std::string>())) {
        case ErrorFamily::coin: {
            CoinError c;
            for (Vertex v : kClockwise) c.blocks[code(v)] = mat2_from(p.at("blocks").at(vertex_label(v)));
            spec.model = c;
            break;
        }
        case ErrorFamily::shift: {
            ShiftError s;
            s.alpha = pair_from(p.at("alpha"));
            s.beta = pair_from(p.at("beta"));
            s.gamma = pair_from(p.at("gamma"));
            spec.model = s;
            break;
        }
        case ErrorFamily::pauli:
            spec.model = PauliFlip{PauliWord::parse(p.at("word").get<std::string>())};
            break;
    }
    validate(spec);
    return spec;
}

json to_json(const Session& s, const LogicalReadout& readout) {
    json j;
    j["reference"] = signs_json(s.history.reference);
    j["cycles"] = json::array();
    for (const auto& c : s.history.cycles)
        j["cycles"].push_back({{"parity", c.parity}, {"eigenvalues", signs_json(c.eigenvalues)}, {"m", c.m.str()}});
    j["injected"] = json::array();
    for (const auto& e : s.injected) j["injected"].push_back(to_json(e));
    j["frame"] = {{"correction", s.frame.correction.render()}, {"uncorrectable", s.frame.uncorrectable}};
    j["data_frame"] = s.data_frame == DataFrame::shifted ? "shifted" : "unshifted";
    j["readout"] = {{"bloch", readout.bloch}, {"raw", readout.raw}};
    return j;
}

std::string transcript_json(const Session& s, const LogicalReadout& readout) { return to_json(s, readout).dump(2); }

}  // namespace qwec
