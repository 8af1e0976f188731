#include <stdio.h>
#include <string.h>
#include "cmhk.h"

int main(void) {
    int32_t s = 0;
    if (cmhk_hilbert("2", "5", 5, &s) != CMHK_STATUS_OK || s != -1) return 10;
    if (cmhk_hilbert("0", "5", 5, &s) != CMHK_STATUS_INVALID_INPUT) return 11;
    if (cmhk_last_error() == NULL) return 12;

    CmhkForm *f = NULL;
    if (cmhk_form_from_json("{\"diagonal\": [\"-1\", \"-1\"]}", &f) != CMHK_STATUS_OK) return 20;
    if (cmhk_form_epsilon(f, 2, &s) != CMHK_STATUS_OK || s != -1) return 21;
    cmhk_form_free(f);

    CmhkTower *t = NULL;
    if (cmhk_tower_new(5, 1, 2, 40, 0, &t) != CMHK_STATUS_OK) return 30;
    if (cmhk_tower_degree(t) != 2) return 31;
    if (cmhk_lt_verify(t, 0) != CMHK_STATUS_OK) return 32;
    cmhk_tower_free(t);

    char *report = NULL;
    const char *req = "{\"g\": [1,1,1,1,1], \"r\": [0,0,0,0,1], \"p\": 2, \"precision\": 30,"
                      " \"gauges\": [[1, 2]], \"hodge\": {\"1\": 1, \"-1\": 1, \"0\": 2}}";
    if (cmhk_pipeline_json(req, 0, &report) != CMHK_STATUS_OK) return 40;
    if (strstr(report, "\"pass\":true") == NULL) return 41;
    cmhk_string_free(report);

    printf("ok %s\n", cmhk_version());
    return 0;
}
