#pragma once

#include <array>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reiqc {

/// Role of a level inside a CNOT scheme: ground |g>, qubit |0> and |1>, auxiliary |1'>.
enum class Role { ground, zero, one, aux };

inline constexpr std::array<Role, 4> kAllRoles{Role::ground, Role::zero, Role::one, Role::aux};

std::string_view role_name(Role role);
/// Accepts "g", "0", "1", "1'" (also "aux", "ground").
Role parse_role(std::string_view text);

struct Level {
    std::string label;
    double energy_cm1 = 0.0;
    double lifetime_us = std::numeric_limits<double>::infinity();
    double u2_diag_sq = 0.0;  ///< |U(2)_jj|^2

    bool is_ground() const { return energy_cm1 == 0.0; }
};

/// |U(2)|^2, |U(4)|^2, |U(6)|^2 for one level pair.
struct USquared {
    double u2 = 0.0;
    double u4 = 0.0;
    double u6 = 0.0;

    double max() const;
    bool operator==(const USquared&) const = default;
};

/// One column of the scheme table, fully resolved against the level data.
/// The ground level may coincide with the auxiliary level.
struct LevelScheme {
    std::string ion;
    int index = 0;
    Level ground;
    Level zero;
    Level one;
    Level aux;

    const Level& level(Role role) const;
    bool ground_is_aux() const { return ground.label == aux.label; }
    std::string id() const;

    /// Distinct simulated levels in local order: [g,] 0, 1, 1'.
    std::vector<Role> local_roles() const;
    int local_index(Role role) const;
    int dimension() const { return ground_is_aux() ? 3 : 4; }
};

/// |E_a - E_b| in cm^-1. Throws ValidationError when both roles name the same level.
double transition_frequency(const LevelScheme& scheme, Role a, Role b);

/// An unordered pair of distinct scheme levels; `a` precedes `b` in local order.
struct Transition {
    Role a = Role::zero;
    Role b = Role::aux;

    bool operator==(const Transition&) const = default;
};

/// All level pairs of the scheme in local order: (0,1) before (0,2) ... The
/// ground role is folded into the auxiliary role when they coincide.
std::vector<Transition> scheme_transitions(const LevelScheme& scheme);
/// Position of the (a, b) pair in scheme_transitions(); order-insensitive.
int transition_index(const LevelScheme& scheme, Role a, Role b);
std::string transition_name(const Transition& t);
Transition parse_transition(std::string_view text);

struct SchemeRef {
    std::string ion;
    int index = 0;
};

/// Immutable database of level energies, lifetimes, Judd-Ofelt elements and
/// CNOT schemes. Every invariant is checked when the tables are parsed.
class IonDatabase {
public:
    /// The tables compiled into the library from data/*.csv.
    static const IonDatabase& embedded();
    static IonDatabase parse(std::string_view levels_csv, std::string_view judd_ofelt_csv,
                             std::string_view schemes_csv);
    /// Reads levels.csv, judd_ofelt.csv and schemes.csv from a directory.
    static IonDatabase load_directory(const std::filesystem::path& dir);

    std::vector<std::string> ions() const;
    std::vector<Level> levels(std::string_view ion) const;
    const Level& level(std::string_view ion, std::string_view label) const;
    USquared u_sq(std::string_view ion, std::string_view level_a, std::string_view level_b) const;
    LevelScheme load_scheme(std::string_view ion, int index) const;
    std::vector<SchemeRef> schemes() const;

    std::string serialize_levels() const;
    std::string serialize_judd_ofelt() const;
    std::string serialize_schemes() const;

private:
    struct SchemeRow {
        std::string zero, one, aux;
    };
    using PairKey = std::pair<std::string, std::string>;

    static PairKey key(std::string_view a, std::string_view b);
    void validate() const;

    std::map<std::string, std::vector<Level>> levels_;
    std::map<std::string, std::map<PairKey, USquared>> judd_ofelt_;
    std::map<std::string, std::map<int, SchemeRow>> schemes_;
};

/// "Tm", "tm3+" and "Tm3+" all map to "Tm3+".
std::string canonical_ion_name(std::string_view ion);

}  // namespace reiqc
