#include <math.h>
#include <stdio.h>
#include "admlab.h"

int main(void) {
    AdmManifold *h = NULL;
    if (adm_manifold_from_json("{\"family\": \"schwarzschild\", \"params\": {\"m\": 1}}", &h) != ADM_STATUS_OK) {
        return 1;
    }
    double mass = 0.0, err = 0.0;
    if (adm_mass(h, &mass, &err) != ADM_STATUS_OK || fabs(mass - 1.0) > 1e-6) {
        return 2;
    }
    adm_manifold_free(h);
    if (adm_manifold_from_json("{\"family\": 7}", &h) != ADM_STATUS_PARSE_ERROR || h != NULL) {
        return 3;
    }
    char buf[512];
    size_t needed = 0;
    if (adm_last_error(buf, sizeof buf, &needed) != ADM_STATUS_OK || needed < 2) {
        return 4;
    }
    printf("mass %.9f\n", mass);
    return 0;
}
