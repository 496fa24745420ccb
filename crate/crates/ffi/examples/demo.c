/* Build: cc demo.c -I../include -L../../../target/release -lnetsens_ffi -lm -lpthread -ldl */
#include <stdio.h>
#include <stdlib.h>

#include "netsens.h"

static int check(NsStatus s, const char *what) {
    if (s != NS_STATUS_OK) {
        const char *msg = ns_last_error_message();
        fprintf(stderr, "%s failed (%d): %s\n", what, (int)s, msg ? msg : "?");
        return 1;
    }
    return 0;
}

int main(void) {
    NsGraph *hidden = NULL, *observed = NULL;
    if (check(ns_graph_erdos_renyi(100, 0.2, 1, &hidden), "generate")) return 1;
    if (check(ns_graph_perturb(hidden, "rm_nodes:0.1", 2, &observed), "perturb")) return 1;

    double rho = 0.0;
    NsPairCounts counts;
    if (check(ns_sensitivity(hidden, observed, "pr", &rho, &counts), "sensitivity")) return 1;

    NsEstimate est;
    if (check(ns_estimate(observed, "rm_nodes:0.1", "pr", NS_ESTIMATOR_ITERATIVE, 50, 3, &est), "estimate")) return 1;

    printf("true %.4f  estimate %.4f (se %.4f)  pairs %llu/%llu\n", rho, est.value, est.std_error,
           (unsigned long long)counts.concordant, (unsigned long long)counts.discordant);
    ns_graph_free(observed);
    ns_graph_free(hidden);
    return 0;
}
