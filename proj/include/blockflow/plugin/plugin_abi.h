#ifndef BLOCKFLOW_PLUGIN_ABI_H
#define BLOCKFLOW_PLUGIN_ABI_H

/*
 * Flat calling convention at the plugin boundary.
 *
 * A plugin is a shared library exporting exactly two symbols:
 *
 *   const bf_manifest* blockflow_plugin_manifest(void);
 *   bf_block*          blockflow_create(const char* label);
 *
 * Everything else crosses the boundary through the two function tables
 * below: the host drives a block through bf_block_api, and the block
 * queries the host through bf_context_api. Neither side sees the other's
 * object layout, so plugins built once load unchanged into any host with
 * the same BF_ABI_VERSION.
 *
 * All functions returning bf_status use 0 for success. Strings and arrays
 * returned by the host stay valid for the duration of the current lifecycle
 * call. No exceptions may cross this boundary.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define BF_ABI_VERSION 1

#define BF_MANIFEST_SYMBOL "blockflow_plugin_manifest"
#define BF_FACTORY_SYMBOL "blockflow_create"

typedef int32_t bf_status; /* 0 = ok */

enum {
  BF_DTYPE_FLOAT64 = 0,
  BF_DTYPE_INT32 = 1,
  BF_DTYPE_BOOL = 2
};

/* value kinds reported by value_kind(); mirrors the parameter kinds */
enum {
  BF_VALUE_SCALAR = 0,
  BF_VALUE_INT = 1,
  BF_VALUE_BOOL = 2,
  BF_VALUE_STRING = 3,
  BF_VALUE_VECTOR = 4,
  BF_VALUE_MISSING = -1
};

/* lookup scopes for value_* functions */
enum {
  BF_SCOPE_PARAMETER = 0,
  BF_SCOPE_CONFIGURATION = 1
};

#define BF_WIDTH_DYNAMIC (-1)

typedef struct bf_port_spec {
  int32_t index;
  int32_t width; /* BF_WIDTH_DYNAMIC until resolved */
  int32_t dtype;
  int32_t direct_feedthrough; /* inputs only */
} bf_port_spec;

/* Opaque host-side context for one block instance. */
typedef struct bf_context bf_context;

/* Callbacks the host provides; the block-side view of the engine. */
typedef struct bf_context_api {
  /* -- parameters and model configuration ------------------------------- */
  int32_t (*value_kind)(bf_context* ctx, int32_t scope, const char* name);
  bf_status (*value_scalar)(bf_context* ctx, int32_t scope, const char* name,
                            double* out);
  bf_status (*value_int)(bf_context* ctx, int32_t scope, const char* name,
                         int64_t* out);
  bf_status (*value_bool)(bf_context* ctx, int32_t scope, const char* name,
                          int32_t* out);
  bf_status (*value_string)(bf_context* ctx, int32_t scope, const char* name,
                            const char** out, int32_t* length);
  bf_status (*value_vector)(bf_context* ctx, int32_t scope, const char* name,
                            const double** out, int32_t* length);

  /* -- port declaration (valid during declare_ports only) --------------- */
  bf_status (*declare_input)(bf_context* ctx, bf_port_spec spec);
  bf_status (*declare_output)(bf_context* ctx, bf_port_spec spec);
  bf_status (*declare_finite_outputs)(bf_context* ctx, int32_t enabled);

  /* -- resolved ports (valid from initialize onward) --------------------- */
  int32_t (*input_count)(bf_context* ctx);
  int32_t (*output_count)(bf_context* ctx);
  bf_status (*input_spec)(bf_context* ctx, int32_t index, bf_port_spec* out);
  bf_status (*output_spec)(bf_context* ctx, int32_t index, bf_port_spec* out);

  /* -- signal payloads (valid during output only) ------------------------ */
  const void* (*input_data)(bf_context* ctx, int32_t index);
  void* (*output_data)(bf_context* ctx, int32_t index);

  /* -- timing ------------------------------------------------------------ */
  double (*step_size)(bf_context* ctx);
  double (*sim_time)(bf_context* ctx);
} bf_context_api;

/* A block instance. Plugins embed this as the first member of their own
 * instance struct and fill `api` with the table driving it. */
typedef struct bf_block bf_block;

typedef struct bf_block_api {
  bf_status (*declare_ports)(bf_block* block, bf_context* ctx,
                             const bf_context_api* host);
  bf_status (*initialize)(bf_block* block, bf_context* ctx,
                          const bf_context_api* host);
  bf_status (*output)(bf_block* block, bf_context* ctx,
                      const bf_context_api* host);
  bf_status (*terminate)(bf_block* block, bf_context* ctx,
                         const bf_context_api* host);
  /* Reason for the most recent failing call; plugin-owned storage. */
  const char* (*last_error)(bf_block* block);
  void (*destroy)(bf_block* block);
} bf_block_api;

struct bf_block {
  const bf_block_api* api;
};

typedef struct bf_manifest {
  int32_t abi_version; /* must equal BF_ABI_VERSION of the host */
  int32_t label_count;
  const char* const* labels;
} bf_manifest;

typedef const bf_manifest* (*bf_manifest_fn)(void);
typedef bf_block* (*bf_factory_fn)(const char* label);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BLOCKFLOW_PLUGIN_ABI_H */
