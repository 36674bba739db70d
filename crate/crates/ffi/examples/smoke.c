/* Minimal C consumer: synthesize a corpus, build one sequence's ladders,
 * print the evaluation deltas.
 *
 * Build (from the workspace root, after `cargo build -p rqe-ladder-ffi`):
 *   cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *      -Ltarget/debug -lrqe_ladder_ffi -lm -o smoke
 */
#include <stdio.h>
#include <string.h>

#include "rqe_ladder.h"

int main(void) {
    RqelCorpus *corpus = NULL;
    RqelStatus status = rqel_corpus_synth(NULL, &corpus);
    if (status != RQEL_STATUS_OK) {
        fprintf(stderr, "synth failed: %s\n", rqel_last_error());
        return 1;
    }
    printf("library %s, %zu sequences\n", rqel_version(),
           rqel_corpus_sequence_count(corpus));

    char *ladders = NULL;
    status = rqel_sequence_ladders_json(corpus, "seq_000", NULL, &ladders);
    if (status != RQEL_STATUS_OK) {
        fprintf(stderr, "ladders failed: %s\n", rqel_last_error());
        rqel_corpus_free(corpus);
        return 1;
    }
    printf("seq_000 ladders JSON: %zu bytes\n", strlen(ladders));
    rqel_string_free(ladders);

    char *report = NULL;
    status = rqel_corpus_eval_json(corpus, NULL, &report);
    if (status != RQEL_STATUS_OK) {
        fprintf(stderr, "eval failed: %s\n", rqel_last_error());
        rqel_corpus_free(corpus);
        return 1;
    }
    printf("%s\n", report);
    rqel_string_free(report);
    rqel_corpus_free(corpus);
    return 0;
}
