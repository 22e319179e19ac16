#pragma once

#include "lab/covering.hpp"
#include "lab/dynamics.hpp"

#include <json.hpp>

namespace lab {

using json = nlohmann::ordered_json;

inline json rat_json(const Rat& r) {
    return json{{"num", boost::multiprecision::numerator(r).str()},
                {"den", boost::multiprecision::denominator(r).str()}};
}

inline json element_json(const GroupElement& g) {
    return std::visit([](const auto& e) -> json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZdElem>) {
            return json(e.v);
        } else if constexpr (std::is_same_v<T, HeisElem>) {
            return json{e.k, e.m, e.n};
        } else if constexpr (std::is_same_v<T, FreeElem>) {
            return json(e.w);
        } else {
            json arr = json::array();
            for (auto [i, v] : e.c) arr.push_back(json{i, v});
            return arr;
        }
    }, g);
}

inline json family_json(const IncrementalSequence& seq) {
    const GroupContext& ctx = *seq.family.ctx;
    json members = json::array();
    for (const auto& mem : seq.family.members)
        members.push_back(json{{"radius", mem.radius}, {"center", element_json(mem.center)}});
    json gens = json::array();
    for (const auto& g : ctx.generators()) gens.push_back(element_json(g));
    return json{{"group", group_kind_name(ctx.kind())},
                {"generators", gens},
                {"members", members},
                {"certificate",
                 {{"incremental", seq.verified},
                  {"multiplicity", seq.multiplicity_at_identity},
                  {"witness", element_json(seq.witness)}}}};
}

inline json stage_json(const TowerStage& stage) {
    json pieces = json::array();
    for (const auto& [g, p] : stage.pieces) {
        json piece{{"element", element_json(g)},
                   {"interval", json{rat_json(p.start), rat_json(p.start + stage.r)}},
                   {"phi", rat_json(p.phi)},
                   {"psi", rat_json(p.psi)}};
        piece["idx"] = p.has_idx ? json(p.idx) : json(nullptr);
        pieces.push_back(std::move(piece));
    }
    return json{{"n", stage.n},
                {"r_n", rat_json(stage.r)},
                {"pieces", pieces},
                {"norms", {{"phi_l1", rat_json(stage.phi_l1())},
                           {"psi_l1", rat_json(stage.psi_l1())}}}};
}

} // namespace lab
