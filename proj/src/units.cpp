#include "reiqc/units.hpp"

#include "reiqc/error.hpp"

namespace reiqc::units {

double wave_number(double wavenumber_vac_cm1, double refractive_index) {
    if (!(refractive_index >= 1.0)) {
        throw ValidationError("wave_number: refractive index must be >= 1");
    }
    if (!(wavenumber_vac_cm1 > 0.0)) throw ValidationError("wave_number: wavenumber must be > 0");
    return kTwoPi * wavenumber_vac_cm1 * kCmPerMeter * refractive_index;
}

}  // namespace reiqc::units
