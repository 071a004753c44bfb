#include <stdio.h>
#include <string.h>
#include "icdual.h"

int main(void) {
    IcdualTable *t = icdual_table_new(2);
    for (int64_t a = -1; a <= 1; a++) {
        for (int64_t b = -1; b <= 1; b++) {
            int64_t x[2] = {a, b};
            int64_t v = (a > b ? a - b : b - a) + (a < 0 ? -a : a);
            if (icdual_table_set(t, x, v) != ICDUAL_STATUS_OK) return 1;
        }
    }
    int32_t holds = 0;
    if (icdual_check_ic(t, 0, &holds) != ICDUAL_STATUS_OK || holds != 1) return 2;
    int64_t pt[2], val;
    if (icdual_minimize(t, NULL, pt, &val) != ICDUAL_STATUS_OK || val != 0) return 3;
    char *report = NULL;
    int32_t code = -1;
    if (icdual_run_json("[\"minimize\"]", "{\"dimension\": 1, \"table\": [[[\"0\"], \"5\"]]}", &report, &code)
        != ICDUAL_STATUS_OK || code != 0 || strstr(report, "\"minimized\"") == NULL) return 4;
    icdual_string_free(report);
    if (icdual_run_json("not json", NULL, &report, &code) != ICDUAL_STATUS_PARSE) return 5;
    if (icdual_last_error() == NULL) return 6;
    icdual_table_free(t);
    printf("ok\n");
    return 0;
}
