#include <stdio.h>
#include <string.h>
#include "dicksonlab.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    DlField *f = NULL;
    CHECK(dl_field_new(3, 2, false, &f) == DL_STATUS_OK);
    CHECK(dl_field_order(f) == 9);

    uint64_t v = 0;
    CHECK(dl_eval_e1(f, 4, 2, DL_EVAL_METHOD_RECURSIVE, &v) == DL_STATUS_OK);
    uint64_t w = 0;
    CHECK(dl_eval_e1(f, 4, 2, DL_EVAL_METHOD_FUNCTIONAL, &w) == DL_STATUS_OK);
    CHECK(v == w);

    uint64_t sums[80];
    size_t written = 0;
    CHECK(dl_sum_table(f, DL_SUM_METHOD_RECURRENCE, sums, 80, &written) == DL_STATUS_OK);
    CHECK(written == 80);
    CHECK(sums[0] == 0);

    char *info = dl_field_info_json(f);
    CHECK(info != NULL && strstr(info, "\"q\":9") != NULL);
    dl_string_free(info);

    DlField *bad = NULL;
    CHECK(dl_field_new(4, 1, false, &bad) == DL_STATUS_INVALID_ARGUMENT);
    CHECK(strstr(dl_last_error(), "prime") != NULL);

    dl_field_free(f);
    puts("ok");
    return 0;
}
