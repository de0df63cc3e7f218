#include <stdio.h>
#include <string.h>

#include "modbc.h"

int main(void) {
    ModbcGraph *g = NULL;
    if (modbc_graph_generate(500, 0, 7, true, &g) != MODBC_STATUS_OK) {
        char msg[256];
        modbc_last_error(msg, sizeof msg);
        fprintf(stderr, "generate: %s\n", msg);
        return 1;
    }
    size_t n = modbc_graph_node_count(g);
    double gc[500];
    size_t top = 0;
    ModbcStatus s = modbc_modular(g, NULL, NULL, gc, n, &top);
    printf("status %d, %zu nodes, %zu modules, central node %zu, score %.3f\n",
           (int)s, n, modbc_graph_module_count(g), top, gc[top]);
    modbc_graph_free(g);
    return s == MODBC_STATUS_OK ? 0 : 1;
}
