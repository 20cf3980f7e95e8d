#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reiqc/error.hpp"
#include "reiqc/pulse.hpp"

namespace reiqc {

/// Uniform frequency grid. Frequencies are offsets (Hz) from the bare
/// frequency of the spectrum's reference transition.
struct SpectrumGrid {
    double start_hz = 0.0;
    double step_hz = 1.0;
    std::size_t size = 0;

    double at(std::size_t k) const { return start_hz + step_hz * static_cast<double>(k); }
    double stop_hz() const { return size ? at(size - 1) : start_hz; }
    bool operator==(const SpectrumGrid&) const = default;
};
SpectrumGrid make_grid(double lo_hz, double hi_hz, double step_hz);

struct Spectrum {
    SpectrumGrid grid;
    std::vector<double> values;
};

/// An absorption line probed from `from` to `to`.
struct Probe {
    Role from = Role::ground;
    Role to = Role::aux;
};

/// Per-ion level populations in local order.
using Occupation = std::vector<std::vector<double>>;
Occupation ground_occupation(const Register& reg);
/// Occupation of a product state (populations of each ion's levels).
Occupation occupation_of(const EnsembleState& state);
/// Most populated level of each ion (lowest index on ties).
std::vector<int> dominant_levels(const Occupation& occ);

/// Lorentzian with unit area and FWHM `fwhm`; peak 2 / (pi fwhm).
double lorentzian(double x_hz, double fwhm_hz);

/// Line center of ion i's probe (relative to `reference`), including pair
/// shifts from the partners' dominant levels.
double line_center(const Register& reg, int i, const Probe& probe, const Transition& reference,
                   const std::vector<int>& partner_levels);

/// Sum over ions and probes of P_i(from) L(nu - center). Throws ValidationError
/// when the step exceeds Gamma_h / 5 or a weighted line lies within 10 Gamma_h
/// of the grid edge.
Spectrum synth_spectrum(const Register& reg, const Occupation& occ, const std::vector<Probe>& probes,
                        const Transition& reference, double gamma_h_hz, const SpectrumGrid& grid,
                        Exec exec = Exec::parallel);

/// The burn transition: g -> 1', or 1' -> 0 when g is the auxiliary level.
Transition burn_transition(const LevelScheme& scheme);

struct BurnResult {
    Occupation occupation;
    std::vector<int> burned_ids;       ///< ions with transferred population >= 0.5
    std::vector<double> transferred;   ///< per ion, population moved by the pulse
    Transition transition;
};

/// Applies a real pi pulse at `carrier_offset_hz` (relative to the burn
/// transition's bare frequency) to every ion sitting in the burn transition's
/// lower level. Each ion is evolved on its own, with its partners frozen in
/// their dominant levels (their pair shifts enter as a static detuning).
BurnResult burn(const Register& reg, const Occupation& occ, double carrier_offset_hz, double gamma_l_hz);

struct Feature {
    double frequency_hz = 0.0;
    double amplitude = 0.0;  ///< signed value of the difference spectrum
    double area = 0.0;       ///< |integral| between the neighbouring sign changes
};

struct HolePair {
    Feature hole;
    Feature antihole;
    double splitting_hz = 0.0;
    std::optional<int> partner_id;        ///< simulation mode only
    std::optional<double> true_shift_hz;  ///< simulation mode only
};

struct DetectOptions {
    double noise_floor = 0.0;          ///< 0: exact spectra, threshold = max|D| / 100
    std::optional<double> burn_hz;     ///< holes near the burn frequency are the burned ions' own
    double exclude_window_hz = 0.0;    ///< 0 selects Gamma_h
};

struct Detection {
    std::vector<HolePair> pairs;  ///< sorted by splitting, largest first
    std::vector<Feature> unmatched_holes;
    std::vector<Feature> unmatched_antiholes;
    std::vector<Feature> burned_holes;
    double threshold = 0.0;
};

Detection detect_pairs(const Spectrum& before, const Spectrum& after, double gamma_h_hz, const DetectOptions& options = {});

/// Attaches the ion whose unshifted line sits at each hole (within Gamma_h / 2)
/// and its true line displacement.
void attach_ground_truth(Detection& detection, const Register& reg, const Occupation& before, const Occupation& after,
                         const Probe& probe, const Transition& reference, double gamma_h_hz);

struct RegistryPair {
    int id1 = 0;
    int id2 = 0;
    double shift_hz = 0.0;
    double margin = 0.0;
};

struct QubitRegistry {
    std::vector<int> ion_ids;
    std::vector<double> splittings_hz;
    /// Absolute addressing frequencies, one row per ion, one column per scheme transition.
    std::vector<std::vector<double>> addressing_hz;
    std::vector<std::string> transition_names;
    std::vector<RegistryPair> pairs;
    double min_margin = 0.0;
    int k = 1;        ///< number of equivalent ensembles sharing the N' holes
    int n_prime = 0;  ///< holes taken
    int n = 0;        ///< qubits per computer, N' / k
};

/// Raised when fewer than N candidates are feasible; carries what was achieved.
class PartialRegistryError : public PhysicsError {
public:
    PartialRegistryError(const std::string& what, QubitRegistry partial)
        : PhysicsError(what), partial_(std::move(partial)) {}
    const QubitRegistry& partial() const { return partial_; }

private:
    QubitRegistry partial_;
};

struct SelectOptions {
    int n = 1;
    double gamma_l_hz = 1e9;
    double gamma_h_hz = 0.0;
    double margin = 3.0;  ///< addressability: pairwise spacing > margin Gamma_L
    int k = 1;
};

/// Greedy selection by (splitting desc, ion id asc); rejects candidates that
/// collide in frequency or fail the blockade test against a selected member.
QubitRegistry select_ensemble(const std::vector<HolePair>& pairs, const Register& reg, const SelectOptions& options);

/// Parameters of the synthetic burn experiment: one burned ion in a single
/// lattice plane normal to the quadrupole axes, surrounded by its nearest
/// neighbours beyond `min_distance_a`.
struct BurnExperiment {
    double gamma_l_hz = 1e6;
    double gamma_h_hz = 2e5;
    double band_hz = 1e11;         ///< offsets are drawn inside +/- band / 2
    double min_distance_a = 5.0;   ///< keeps the largest splitting inside the band
    int n_ions = 200;              ///< burned ion included
    int plane_edge = 45;
};

/// Register whose first ion is the burned one (offset 0). Neighbour offsets
/// are drawn by rejection so that no hole, antihole or the gap beyond an
/// antihole overlaps another ion's line; offsets are the same on every
/// transition. Throws PhysicsError when the plane or band is too small.
Register planar_burn_ensemble(const IonDatabase& db, const LevelScheme& scheme, const CrystalConfig& crystal,
                              const InteractionModel& model, const BurnExperiment& exp, std::uint64_t seed);

struct BurnRun {
    Probe probe;
    Transition reference;
    Occupation before_occupation;
    BurnResult burn;
    Spectrum before;
    Spectrum after;
    Detection detection;  ///< with ground truth attached
};

/// Burns register ion 0 at its own line, synthesises both spectra on a grid
/// covering every line, and detects hole-antihole pairs.
BurnRun run_burn_experiment(const Register& reg, const BurnExperiment& exp, Exec exec = Exec::parallel);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace reiqc
