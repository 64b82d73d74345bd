#include <math.h>
#include <stdio.h>
#include "ptdephase.h"

static int fail(const char *what, PtdStatus st) {
    fprintf(stderr, "%s: status %d: %s\n", what, (int)st, ptd_last_error_message());
    return 1;
}

int main(void) {
    PtdSystem *sys = NULL;
    PtdEnv *env = NULL;
    PtdStatus st = ptd_system_from_e1(1.0, &sys);
    if (st != PTD_STATUS_OK) return fail("system", st);
    PtdEnvParams params = ptd_env_params_default();
    st = ptd_env_new(&params, &env);
    if (st != PTD_STATUS_OK) return fail("env", st);

    PtdQuadConfig cfg = ptd_quad_config_default();
    PtdQuadResult full, herm;
    st = ptd_lambda_continuum(1.0, sys, env, &cfg, &full);
    if (st != PTD_STATUS_OK) return fail("continuum", st);
    PtdTemperature temp = {300.0, false};
    st = ptd_lambda_hermitian(1.0, 1.0, 0.1, temp, NULL, &herm);
    if (st != PTD_STATUS_OK) return fail("hermitian", st);
    if (fabs(full.value - herm.value) > 1e-8 * herm.value) {
        fprintf(stderr, "mismatch %.17g %.17g\n", full.value, herm.value);
        return 1;
    }

    PtdSystem *broken = NULL;
    st = ptd_system_new(2.0, &broken);
    if (st != PTD_STATUS_PT_BROKEN || broken != NULL) return fail("broken", st);

    PtdQubitState rho = {0.5, {0.5, 0.0}, 0.5}, out;
    st = ptd_evolve_qubit(&rho, log(2.0), &out);
    if (st != PTD_STATUS_OK || fabs(out.rho01.re - 0.25) > 1e-15) return fail("evolve", st);

    printf("lambda(1) = %.17g\n", full.value);
    ptd_env_free(env);
    ptd_system_free(sys);
    return 0;
}
