// json_io.hpp — JSON schemas for Hamiltonians and strings.
//
// Hamiltonian:
//   {"breakpoints":[0,...], "pieces":[{"h11":..,"h12":..,"h22":..},...],
//    "tail":{"h11":..,"h12":..,"h22":..}}
// or the diagonal shorthand (one h1/h2 entry per breakpoint, last = tail):
//   {"breakpoints":[0,...], "h1":[...], "h2":[...]}
//
// String:
//   {"L": number|"inf",
//    "density":[{"upto": t_or_"inf", "value": v}, ...],   // last upto == L
//    "atoms":[{"pos":.., "mass":..}, ...]}
#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "canon/hamiltonian.hpp"
#include "canon/string.hpp"

namespace canon {

using Json = nlohmann::ordered_json;

namespace detail {

inline double json_number(const Json& j, const std::string& where) {
    if (!j.is_number())
        throw std::invalid_argument("field '" + where + "': expected a number");
    return j.get<double>();
}

inline const Json& json_field(const Json& j, const std::string& key,
                              const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument("field '" + where +
                                    "': missing required key '" + key + "'");
    return j.at(key);
}

inline std::vector<double> json_number_array(const Json& j, const std::string& where) {
    if (!j.is_array())
        throw std::invalid_argument("field '" + where + "': expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(json_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline SymMatrix2 json_matrix(const Json& j, const std::string& where) {
    return {json_number(json_field(j, "h11", where), where + ".h11"),
            json_number(json_field(j, "h12", where), where + ".h12"),
            json_number(json_field(j, "h22", where), where + ".h22")};
}

} // namespace detail

inline Hamiltonian hamiltonian_from_json(const Json& j) {
    if (!j.is_object())
        throw std::invalid_argument("hamiltonian: expected a JSON object");
    auto breaks = detail::json_number_array(
        detail::json_field(j, "breakpoints", "hamiltonian"), "breakpoints");
    if (j.contains("h1") || j.contains("h2")) {
        auto h1 = detail::json_number_array(detail::json_field(j, "h1", "hamiltonian"), "h1");
        auto h2 = detail::json_number_array(detail::json_field(j, "h2", "hamiltonian"), "h2");
        if (h1.size() != breaks.size() || h2.size() != breaks.size())
            throw std::invalid_argument(
                "field 'h1'/'h2': need exactly one entry per breakpoint");
        return Hamiltonian::diagonal(std::move(breaks), h1, h2);
    }
    const Json& pieces_json = detail::json_field(j, "pieces", "hamiltonian");
    if (!pieces_json.is_array())
        throw std::invalid_argument("field 'pieces': expected an array");
    std::vector<SymMatrix2> pieces;
    for (std::size_t k = 0; k < pieces_json.size(); ++k)
        pieces.push_back(
            detail::json_matrix(pieces_json[k], "pieces[" + std::to_string(k) + "]"));
    const SymMatrix2 tail =
        detail::json_matrix(detail::json_field(j, "tail", "hamiltonian"), "tail");
    return Hamiltonian(std::move(breaks), std::move(pieces), tail);
}

inline Json hamiltonian_to_json(const Hamiltonian& h) {
    Json j;
    j["breakpoints"] = h.breakpoints();
    if (h.diagonal()) {
        std::vector<double> h1, h2;
        for (std::size_t k = 0; k < h.piece_count(); ++k) {
            h1.push_back(h.piece(k).h11);
            h2.push_back(h.piece(k).h22);
        }
        h1.push_back(h.tail().h11);
        h2.push_back(h.tail().h22);
        j["h1"] = h1;
        j["h2"] = h2;
        return j;
    }
    Json pieces = Json::array();
    for (std::size_t k = 0; k < h.piece_count(); ++k) {
        const SymMatrix2& p = h.piece(k);
        pieces.push_back({{"h11", p.h11}, {"h12", p.h12}, {"h22", p.h22}});
    }
    j["pieces"] = std::move(pieces);
    j["tail"] = {{"h11", h.tail().h11}, {"h12", h.tail().h12}, {"h22", h.tail().h22}};
    return j;
}

inline StringSpec string_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("string: expected a JSON object");
    const Json& lj = detail::json_field(j, "L", "string");
    double length;
    if (lj.is_string() && lj.get<std::string>() == "inf")
        length = std::numeric_limits<double>::infinity();
    else
        length = detail::json_number(lj, "L");

    const Json& density = detail::json_field(j, "density", "string");
    if (!density.is_array() || density.empty())
        throw std::invalid_argument("field 'density': expected a non-empty array");
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    for (std::size_t k = 0; k < density.size(); ++k) {
        const std::string where = "density[" + std::to_string(k) + "]";
        const Json& entry = density[k];
        values.push_back(
            detail::json_number(detail::json_field(entry, "value", where), where + ".value"));
        const Json& upto = detail::json_field(entry, "upto", where);
        const bool last = k + 1 == density.size();
        double up;
        if (upto.is_string() && upto.get<std::string>() == "inf")
            up = std::numeric_limits<double>::infinity();
        else
            up = detail::json_number(upto, where + ".upto");
        if (last) {
            if (up != length)
                throw std::invalid_argument("field '" + where +
                                            ".upto': the last entry must reach L");
        } else {
            breaks.push_back(up);
        }
    }

    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        const Json& aj = j.at("atoms");
        if (!aj.is_array())
            throw std::invalid_argument("field 'atoms': expected an array");
        for (std::size_t k = 0; k < aj.size(); ++k) {
            const std::string where = "atoms[" + std::to_string(k) + "]";
            atoms.push_back(
                {detail::json_number(detail::json_field(aj[k], "pos", where), where + ".pos"),
                 detail::json_number(detail::json_field(aj[k], "mass", where),
                                     where + ".mass")});
        }
    }
    return StringSpec(length, std::move(breaks), std::move(values), std::move(atoms));
}

inline Json string_to_json(const StringSpec& s) {
    Json j;
    if (s.infinite_length())
        j["L"] = "inf";
    else
        j["L"] = s.length();
    Json density = Json::array();
    const auto& breaks = s.density_breaks();
    const auto& values = s.density_values();
    for (std::size_t k = 0; k < values.size(); ++k) {
        Json entry;
        if (k + 1 < breaks.size())
            entry["upto"] = breaks[k + 1];
        else if (s.infinite_length())
            entry["upto"] = "inf";
        else
            entry["upto"] = s.length();
        entry["value"] = values[k];
        density.push_back(std::move(entry));
    }
    j["density"] = std::move(density);
    Json atoms = Json::array();
    for (const Atom& a : s.atoms())
        atoms.push_back({{"pos", a.position}, {"mass", a.mass}});
    j["atoms"] = std::move(atoms);
    return j;
}

} // namespace canon
