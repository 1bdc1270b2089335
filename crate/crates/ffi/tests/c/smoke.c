#include <math.h>
#include <stdio.h>
#include "trap.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    TrapModel *model = NULL;
    CHECK(trap_model_new(100e-6, 4.45, 5.6, -12.8, -11.4, -12.8013, &model) == TRAP_STATUS_OK);

    double vstar = 0.0;
    CHECK(trap_model_transition_voltage(model, &vstar) == TRAP_STATUS_OK);
    CHECK(fabs(vstar + 12.7883929436) < 1e-9);

    TrapShape shape;
    CHECK(trap_model_shape(model, &shape) == TRAP_STATUS_OK);
    CHECK(shape.well_distance > 3.2e-5 && shape.well_distance < 3.3e-5);

    CHECK(trap_model_set_v3(model, -12.7) == TRAP_STATUS_OK);
    CHECK(trap_model_shape(model, &shape) == TRAP_STATUS_SINGLE_WELL);
    char msg[128];
    CHECK(trap_last_error_message(msg, sizeof msg) > 0);
    trap_model_free(model);

    double f = 0.0;
    TrapRegime regime;
    CHECK(trap_tunneling_frequency(10e-6, 6e-8 * 1.602176634e-19, &f, &regime) == TRAP_STATUS_OK);
    CHECK(regime == TRAP_REGIME_TUNNELING);
    CHECK(fabs(f / 14967.0 - 1.0) < 1e-3);

    TrapSpectrum *spectrum = NULL;
    CHECK(trap_spectrum_new(80.0, 2, 2.0, 801, &spectrum) == TRAP_STATUS_OK);
    CHECK(trap_spectrum_levels(spectrum) == 2);
    trap_spectrum_free(spectrum);

    printf("ok %s\n", trap_version());
    return 0;
}
