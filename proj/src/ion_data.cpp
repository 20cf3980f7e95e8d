#include "reiqc/ion_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "embedded_data.hpp"
#include "reiqc/error.hpp"

namespace reiqc {

using detail::format_double;
using detail::parse_csv;
using detail::parse_double;
using detail::parse_int;

std::string_view role_name(Role role) {
    switch (role) {
        case Role::ground: return "g";
        case Role::zero: return "0";
        case Role::one: return "1";
        case Role::aux: return "1'";
    }
    return "?";
}

Role parse_role(std::string_view text) {
    if (text == "g" || text == "ground") return Role::ground;
    if (text == "0") return Role::zero;
    if (text == "1") return Role::one;
    if (text == "1'" || text == "aux") return Role::aux;
    throw ValidationError("unknown level role '" + std::string(text) + "'");
}

double USquared::max() const { return std::max({u2, u4, u6}); }

std::string canonical_ion_name(std::string_view ion) {
    std::string name(ion);
    if (name.size() >= 2 && name.substr(name.size() - 2) == "3+") name.resize(name.size() - 2);
    if (!name.empty()) {
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        for (std::size_t i = 1; i < name.size(); ++i) {
            name[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(name[i])));
        }
    }
    return name + "3+";
}

const Level& LevelScheme::level(Role role) const {
    switch (role) {
        case Role::ground: return ground;
        case Role::zero: return zero;
        case Role::one: return one;
        case Role::aux: return aux;
    }
    throw ValidationError("bad role");
}

std::string LevelScheme::id() const { return ion + "/" + std::to_string(index); }

std::vector<Role> LevelScheme::local_roles() const {
    if (ground_is_aux()) return {Role::zero, Role::one, Role::aux};
    return {Role::ground, Role::zero, Role::one, Role::aux};
}

int LevelScheme::local_index(Role role) const {
    if (ground_is_aux()) {
        switch (role) {
            case Role::zero: return 0;
            case Role::one: return 1;
            case Role::ground:
            case Role::aux: return 2;
        }
    }
    switch (role) {
        case Role::ground: return 0;
        case Role::zero: return 1;
        case Role::one: return 2;
        case Role::aux: return 3;
    }
    return -1;
}

double transition_frequency(const LevelScheme& scheme, Role a, Role b) {
    const Level& la = scheme.level(a);
    const Level& lb = scheme.level(b);
    if (a == b || la.label == lb.label) {
        throw ValidationError("transition_frequency: roles " + std::string(role_name(a)) + " and " +
                              std::string(role_name(b)) + " name the same level");
    }
    return std::abs(la.energy_cm1 - lb.energy_cm1);
}

std::vector<Transition> scheme_transitions(const LevelScheme& scheme) {
    const auto roles = scheme.local_roles();
    std::vector<Transition> out;
    for (std::size_t i = 0; i < roles.size(); ++i) {
        for (std::size_t j = i + 1; j < roles.size(); ++j) out.push_back({roles[i], roles[j]});
    }
    return out;
}

int transition_index(const LevelScheme& scheme, Role a, Role b) {
    int la = scheme.local_index(a);
    int lb = scheme.local_index(b);
    if (la == lb) {
        throw ValidationError("transition " + std::string(role_name(a)) + "-" + std::string(role_name(b)) +
                              " joins a level to itself in scheme " + scheme.id());
    }
    if (la > lb) std::swap(la, lb);
    const int d = scheme.dimension();
    // Row-major enumeration of the strict upper triangle.
    return la * d - la * (la + 1) / 2 + (lb - la - 1);
}

std::string transition_name(const Transition& t) {
    return std::string(role_name(t.a)) + "-" + std::string(role_name(t.b));
}

Transition parse_transition(std::string_view text) {
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) throw ValidationError("transition must look like '0-1''");
    return {parse_role(text.substr(0, dash)), parse_role(text.substr(dash + 1))};
}

IonDatabase::PairKey IonDatabase::key(std::string_view a, std::string_view b) {
    if (b < a) std::swap(a, b);
    return {std::string(a), std::string(b)};
}

const IonDatabase& IonDatabase::embedded() {
    static const IonDatabase db = parse(detail::kLevelsCsv, detail::kJuddOfeltCsv, detail::kSchemesCsv);
    return db;
}

IonDatabase IonDatabase::load_directory(const std::filesystem::path& dir) {
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        if (!in) throw NotFoundError("cannot open " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    return parse(slurp(dir / "levels.csv"), slurp(dir / "judd_ofelt.csv"), slurp(dir / "schemes.csv"));
}

IonDatabase IonDatabase::parse(std::string_view levels_csv, std::string_view judd_ofelt_csv,
                               std::string_view schemes_csv) {
    IonDatabase db;

    const auto lv = parse_csv(levels_csv);
    const int c_ion = lv.column("ion"), c_level = lv.column("level"), c_e = lv.column("energy_cm1"),
              c_tau = lv.column("lifetime_us");
    for (const auto& row : lv.rows) {
        Level level;
        level.label = row[c_level];
        level.energy_cm1 = parse_double(row[c_e], "levels.energy_cm1");
        level.lifetime_us = parse_double(row[c_tau], "levels.lifetime_us");
        auto& list = db.levels_[canonical_ion_name(row[c_ion])];
        if (std::any_of(list.begin(), list.end(), [&](const Level& l) { return l.label == level.label; })) {
            throw ValidationError("levels: duplicate level " + level.label);
        }
        list.push_back(std::move(level));
    }

    const auto jo = parse_csv(judd_ofelt_csv);
    const int j_ion = jo.column("ion"), j_a = jo.column("level_a"), j_b = jo.column("level_b"),
              j_2 = jo.column("u2_sq"), j_4 = jo.column("u4_sq"), j_6 = jo.column("u6_sq");
    for (const auto& row : jo.rows) {
        USquared u{parse_double(row[j_2], "judd_ofelt.u2_sq"), parse_double(row[j_4], "judd_ofelt.u4_sq"),
                   parse_double(row[j_6], "judd_ofelt.u6_sq")};
        auto [it, inserted] = db.judd_ofelt_[canonical_ion_name(row[j_ion])].emplace(key(row[j_a], row[j_b]), u);
        if (!inserted) throw ValidationError("judd_ofelt: duplicate pair " + row[j_a] + "," + row[j_b]);
    }

    const auto sc = parse_csv(schemes_csv);
    const int s_ion = sc.column("ion"), s_idx = sc.column("index"), s_0 = sc.column("zero"),
              s_1 = sc.column("one"), s_aux = sc.column("aux");
    for (const auto& row : sc.rows) {
        const int index = static_cast<int>(parse_int(row[s_idx], "schemes.index"));
        auto [it, inserted] =
            db.schemes_[canonical_ion_name(row[s_ion])].emplace(index, SchemeRow{row[s_0], row[s_1], row[s_aux]});
        if (!inserted) throw ValidationError("schemes: duplicate index for " + row[s_ion]);
    }

    // Fill diagonal |U(2)|^2 from the Judd-Ofelt table.
    for (auto& [ion, list] : db.levels_) {
        for (auto& level : list) {
            auto jt = db.judd_ofelt_.find(ion);
            if (jt == db.judd_ofelt_.end()) continue;
            auto dt = jt->second.find(key(level.label, level.label));
            if (dt != jt->second.end()) level.u2_diag_sq = dt->second.u2;
        }
    }

    db.validate();
    return db;
}

void IonDatabase::validate() const {
    for (const auto& [ion, list] : levels_) {
        int grounds = 0;
        for (const auto& level : list) {
            const std::string where = ion + " " + level.label;
            if (!(level.energy_cm1 >= 0.0)) throw ValidationError(where + ": energy must be >= 0");
            if (!(level.lifetime_us > 0.0)) throw ValidationError(where + ": lifetime must be > 0");
            if (level.is_ground()) {
                ++grounds;
                if (!std::isinf(level.lifetime_us)) throw ValidationError(where + ": ground level needs infinite lifetime");
            }
        }
        if (grounds != 1) throw ValidationError(ion + ": exactly one zero-energy level required");
    }
    for (const auto& [ion, table] : judd_ofelt_) {
        auto lt = levels_.find(ion);
        if (lt == levels_.end()) throw ValidationError("judd_ofelt: ion " + ion + " has no level table");
        auto known = [&](const std::string& label) {
            return std::any_of(lt->second.begin(), lt->second.end(), [&](const Level& l) { return l.label == label; });
        };
        for (const auto& [k, u] : table) {
            if (!known(k.first) || !known(k.second)) {
                throw ValidationError("judd_ofelt: " + ion + " pair " + k.first + "," + k.second + " names an unknown level");
            }
            if (u.u2 < 0 || u.u4 < 0 || u.u6 < 0) {
                throw ValidationError("judd_ofelt: " + ion + " pair " + k.first + "," + k.second + " is negative");
            }
        }
    }
    for (const auto& [ion, rows] : schemes_) {
        for (const auto& [index, row] : rows) {
            // load_scheme() performs the per-scheme checks.
            (void)row;
            (void)load_scheme(ion, index);
        }
    }
}

std::vector<std::string> IonDatabase::ions() const {
    std::vector<std::string> out;
    for (const auto& [ion, list] : levels_) out.push_back(ion);
    return out;
}

std::vector<Level> IonDatabase::levels(std::string_view ion) const {
    auto it = levels_.find(canonical_ion_name(ion));
    if (it == levels_.end()) throw NotFoundError("unknown ion '" + std::string(ion) + "'");
    return it->second;
}

const Level& IonDatabase::level(std::string_view ion, std::string_view label) const {
    auto it = levels_.find(canonical_ion_name(ion));
    if (it == levels_.end()) throw NotFoundError("unknown ion '" + std::string(ion) + "'");
    for (const auto& level : it->second) {
        if (level.label == label) return level;
    }
    throw NotFoundError("ion " + it->first + " has no level '" + std::string(label) + "'");
}

USquared IonDatabase::u_sq(std::string_view ion, std::string_view level_a, std::string_view level_b) const {
    auto it = judd_ofelt_.find(canonical_ion_name(ion));
    if (it == judd_ofelt_.end()) throw NotFoundError("no Judd-Ofelt data for ion '" + std::string(ion) + "'");
    auto jt = it->second.find(key(level_a, level_b));
    if (jt == it->second.end()) {
        throw NotFoundError("no Judd-Ofelt entry for " + it->first + " (" + std::string(level_a) + ", " +
                            std::string(level_b) + ")");
    }
    return jt->second;
}

std::vector<SchemeRef> IonDatabase::schemes() const {
    std::vector<SchemeRef> out;
    for (const auto& [ion, rows] : schemes_) {
        for (const auto& [index, row] : rows) out.push_back({ion, index});
    }
    return out;
}

LevelScheme IonDatabase::load_scheme(std::string_view ion, int index) const {
    const std::string name = canonical_ion_name(ion);
    auto it = schemes_.find(name);
    auto jt = it == schemes_.end() ? decltype(it->second.end()){} : it->second.find(index);
    if (it == schemes_.end() || jt == it->second.end()) {
        std::string available;
        for (const auto& s : schemes()) available += " " + s.ion + "/" + std::to_string(s.index);
        throw NotFoundError("unknown scheme " + name + "/" + std::to_string(index) + "; available:" + available);
    }
    const SchemeRow& row = jt->second;

    LevelScheme scheme;
    scheme.ion = name;
    scheme.index = index;
    scheme.zero = level(name, row.zero);
    scheme.one = level(name, row.one);
    scheme.aux = level(name, row.aux);
    for (const auto& l : levels_.at(name)) {
        if (l.is_ground()) scheme.ground = l;
    }

    const std::string where = "scheme " + scheme.id();
    if (row.zero == row.one || row.zero == row.aux || row.one == row.aux) {
        throw ValidationError(where + ": roles 0, 1, 1' must be distinct levels");
    }
    if (!(scheme.aux.u2_diag_sq > scheme.zero.u2_diag_sq && scheme.aux.u2_diag_sq > scheme.one.u2_diag_sq)) {
        throw ValidationError(where + ": |U(2)|^2 of 1' must exceed that of 0 and 1");
    }
    // Every pair of scheme levels must have intensity data.
    const auto roles = scheme.local_roles();
    for (std::size_t a = 0; a < roles.size(); ++a) {
        for (std::size_t b = a; b < roles.size(); ++b) {
            (void)u_sq(name, scheme.level(roles[a]).label, scheme.level(roles[b]).label);
        }
    }
    return scheme;
}

std::string IonDatabase::serialize_levels() const {
    std::string out = "ion,level,energy_cm1,lifetime_us\n";
    for (const auto& [ion, list] : levels_) {
        for (const auto& l : list) {
            out += ion + "," + l.label + "," + format_double(l.energy_cm1) + "," + format_double(l.lifetime_us) + "\n";
        }
    }
    return out;
}

std::string IonDatabase::serialize_judd_ofelt() const {
    std::string out = "ion,level_a,level_b,u2_sq,u4_sq,u6_sq\n";
    for (const auto& [ion, table] : judd_ofelt_) {
        for (const auto& [k, u] : table) {
            out += ion + "," + k.first + "," + k.second + "," + format_double(u.u2) + "," + format_double(u.u4) + "," +
                   format_double(u.u6) + "\n";
        }
    }
    return out;
}

std::string IonDatabase::serialize_schemes() const {
    std::string out = "ion,index,zero,one,aux\n";
    for (const auto& [ion, rows] : schemes_) {
        for (const auto& [index, row] : rows) {
            out += ion + "," + std::to_string(index) + "," + row.zero + "," + row.one + "," + row.aux + "\n";
        }
    }
    return out;
}

}  // namespace reiqc
