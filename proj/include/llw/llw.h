/* C interface to the linear logic workbench.
 *
 * Every function returning int reports an llw_status. On failure the
 * thread-local message behind llw_last_error() says what went wrong and the
 * out-parameters are left untouched. Strings handed out through char** are
 * owned by the caller and released with llw_free(). Handles are released with
 * their *_destroy function; destroying NULL is a no-op.
 */
#ifndef LLW_H
#define LLW_H

#include <stddef.h>

#if defined(_WIN32)
#define LLW_API __declspec(dllexport)
#else
#define LLW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum llw_status {
    LLW_OK = 0,
    LLW_ERR_SYNTAX = 1,
    LLW_ERR_INVALID = 2,   /* well-formed input that the operation rejects */
    LLW_ERR_BUDGET = 3,
    LLW_ERR_IO = 4,
    LLW_ERR_NULL = 5,
    LLW_ERR_HANDLE = 6,    /* a handle of the wrong type or already destroyed */
    LLW_ERR_INTERNAL = 7
};

LLW_API const char *llw_version(void);
LLW_API const char *llw_status_name(int status);
LLW_API const char *llw_last_error(void);
LLW_API void llw_free(char *s);

typedef struct llw_formula llw_formula;
typedef struct llw_proof llw_proof;
typedef struct llw_machine llw_machine;
typedef struct llw_model llw_model;

/* ---- formulas and sequents ---- */

LLW_API int llw_formula_parse(const char *text, llw_formula **out);
LLW_API void llw_formula_destroy(llw_formula *f);
LLW_API int llw_formula_render(const llw_formula *f, char **out);
LLW_API int llw_formula_nnf(const llw_formula *f, llw_formula **out);
LLW_API int llw_formula_dual(const llw_formula *f, llw_formula **out);
LLW_API int llw_formula_size(const llw_formula *f, size_t *out);
/* "positive", "negative" or "atomic"; static storage. */
LLW_API int llw_formula_polarity(const llw_formula *f, const char **out);
/* Parses a sequent and renders its canonical (NNF, sorted) form. */
LLW_API int llw_sequent_canonical(const char *text, char **out);

/* ---- proofs ---- */

LLW_API int llw_proof_read(const char *text, llw_proof **out);
LLW_API void llw_proof_destroy(llw_proof *p);
LLW_API int llw_proof_write(const llw_proof *p, char **out);
LLW_API int llw_proof_pretty(const llw_proof *p, char **out);
LLW_API int llw_proof_conclusion(const llw_proof *p, char **out);
LLW_API int llw_proof_node_count(const llw_proof *p, size_t *out);
LLW_API int llw_proof_cut_count(const llw_proof *p, size_t *out);
/* *ok is 1 when the kernel accepts the proof. Otherwise *report holds one
 * "<node path>: <message>" line per failure. */
LLW_API int llw_proof_check(const llw_proof *p, int *ok, char **report);

/* ---- proof search ---- */

enum llw_search_outcome { LLW_PROVABLE = 0, LLW_NOT_PROVABLE = 1, LLW_SEARCH_BUDGET = 2 };

typedef struct llw_search_limits {
    size_t max_visited;     /* 0 keeps the default */
    long time_budget_ms;    /* 0 keeps the default */
} llw_search_limits;

/* proof may be NULL; it is set only for LLW_PROVABLE. */
LLW_API int llw_prove(const char *sequent, const llw_search_limits *limits, int *outcome, size_t *visited,
                      llw_proof **proof);
/* Strategy-free enumeration; LLW_ERR_BUDGET past the size bound. */
LLW_API int llw_oracle_provable(const char *sequent, int *provable);

/* ---- cut elimination ---- */

typedef struct llw_norm_stats {
    size_t steps;
    size_t duplications;
    size_t final_cuts;
    int fuel_exhausted;
} llw_norm_stats;

/* trace may be NULL; otherwise it receives one line per reduction step. */
LLW_API int llw_normalize(const llw_proof *p, size_t fuel, llw_proof **out, llw_norm_stats *stats, char **trace);

/* ---- lambda calculus ---- */

typedef struct llw_lam_stats {
    size_t steps;
    size_t initial_size;
    size_t final_size;
    int fuel_exhausted;
    int affine;
    int sizes_decrease;     /* every step made the term smaller */
} llw_lam_stats;

LLW_API int llw_lam_normalize(const char *term, size_t fuel, char **normal_form, llw_lam_stats *stats);
/* context is "x: a, f: a -> b" or NULL. A type error is LLW_ERR_INVALID and
 * the message names the offending subterm. derivation may be NULL. */
LLW_API int llw_lam_typecheck(const char *context, const char *term, const char *type, char **derivation);
/* *typable is 0 when unification fails; type is then untouched. */
LLW_API int llw_lam_infer(const char *context, const char *term, int *typable, char **type);
LLW_API int llw_lam_translate(const char *context, const char *term, const char *type, llw_proof **out);

/* ---- two counter machines ---- */

LLW_API int llw_machine_parse(const char *text, llw_machine **out);
LLW_API void llw_machine_destroy(llw_machine *m);
LLW_API int llw_machine_write(const llw_machine *m, char **out);
/* Name of the initial state, valid while the handle lives. */
LLW_API int llw_machine_initial(const llw_machine *m, const char **out);
/* id is "(q,m,n) (q',m',n')". On acceptance *trace holds one line per step
 * (may be NULL). */
LLW_API int llw_tcm_simulate(const llw_machine *m, const char *id, size_t bound, int *accepted, size_t *steps,
                             char **trace);
LLW_API int llw_tcm_encode(const llw_machine *m, const char *triplet, char **sequent);
/* Proof of the encoding of `triplet`, read off the shortest accepting run
 * from `id`. A NULL triplet stands for the single triplet of `id`. *out is
 * set to NULL when no run within `bound` exists. */
LLW_API int llw_tcm_prove(const llw_machine *m, const char *id, size_t bound, const char *triplet,
                          llw_proof **out);

/* ---- phase semantics ---- */

LLW_API int llw_model_parse(const char *text, llw_model **out);
LLW_API void llw_model_destroy(llw_model *m);
LLW_API int llw_model_write(const llw_model *m, char **out);
/* *ok is 1 when every atom is a fact and the closed family (if any) passes
 * the topolinear axioms. *contraction is 1 when the model is ok and its
 * closed family also validates contraction, 0 when it does not, and -1 when
 * the model has no closed family. report lists the problems, one per line. */
LLW_API int llw_model_check(const llw_model *m, int *ok, int *contraction, char **report);
LLW_API int llw_phase_valid(const llw_model *m, const char *sequent, int *valid);
/* Interpretation of a formula as an element list "{e1 e2}". */
LLW_API int llw_phase_interp(const llw_model *m, const char *formula, char **out);

/* ---- coherence spaces ---- */

typedef struct llw_tally {
    size_t cases;
    size_t violations;
    size_t skipped;
} llw_tally;

/* env is the atom environment text. *points receives one clique token per
 * line. */
LLW_API int llw_coh_interpret(const llw_proof *p, const char *env, size_t *count, int *is_clique, char **points);
/* Comonad and comonoid laws on every space of at most max_web tokens. report
 * (may be NULL) lists violations. */
LLW_API int llw_coh_check_laws(int max_web, llw_tally *tally, char **report);
LLW_API int llw_coh_trace_roundtrip(int max_web, llw_tally *tally, char **report);
LLW_API int llw_coh_bang_with(int max_web, llw_tally *tally, char **report);

/* ---- corpus ---- */

/* threads = 0 uses every hardware thread. report is key=value text. */
LLW_API int llw_corpus_run(const char *manifest_path, unsigned threads, size_t *fixtures, size_t *failures,
                           char **report);

#ifdef __cplusplus
}
#endif

#endif
