#include <stdio.h>
#include <string.h>
#include "negsphere.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);       \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    int64_t s = 0;
    CHECK(ns_s_construction(2, &s) == NS_STATUS_OK && s == -86);
    CHECK(ns_s_construction(1, &s) == NS_STATUS_INVALID_INPUT);
    CHECK(ns_last_error_message() != NULL);

    NsGraph *g = ns_graph_new();
    size_t a, b, x;
    CHECK(ns_graph_add_vertex(g, "a", -2, &a) == NS_STATUS_OK);
    CHECK(ns_graph_add_vertex(g, NULL, -3, &b) == NS_STATUS_OK);
    CHECK(ns_graph_add_edge(g, a, b) == NS_STATUS_OK);
    CHECK(ns_graph_smooth(g, &s) == NS_STATUS_OK && s == -7);
    CHECK(ns_graph_blow_up_edge(g, a, b, &x) == NS_STATUS_OK && x == 2);
    CHECK(ns_graph_smooth(g, &s) == NS_STATUS_OK && s == -12);
    CHECK(ns_graph_oracle_square(g, &s) == NS_STATUS_OK && s == -12);
    CHECK(ns_graph_add_edge(g, 0, 9) == NS_STATUS_NOT_FOUND);
    ns_graph_free(g);

    NsSearchResult *r = NULL;
    CHECK(ns_search(2, 1, 1, &r) == NS_STATUS_OK);
    CHECK(ns_search_result_best_square(r, &s) == NS_STATUS_OK && s == -92);
    char *json = NULL;
    CHECK(ns_search_result_to_json(r, &json) == NS_STATUS_OK);
    CHECK(strstr(json, "\"best_square\":-92") != NULL);
    ns_string_free(json);
    ns_search_result_free(r);

    printf("ok\n");
    return 0;
}
