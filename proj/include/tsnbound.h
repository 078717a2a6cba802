/*
 * tsnbound C API: worst-case delay analysis for time-sensitive networks.
 *
 * All functions that can fail return a tsnb_status; on failure the thread's
 * last error message is available through tsnb_last_error(). Objects are
 * opaque handles released with their matching *_free function; strings
 * returned through char** out-parameters are released with
 * tsnb_string_free().
 */
#ifndef TSNBOUND_H
#define TSNBOUND_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsnb_status {
    TSNB_OK = 0,
    TSNB_ERR_INVALID_ARG = 1,
    TSNB_ERR_PARSE = 2,
    TSNB_ERR_UNSTABLE = 3,
    TSNB_ERR_DIVERGED = 4,
    TSNB_ERR_IO = 5,
    TSNB_ERR_INTERNAL = 6
} tsnb_status;

typedef enum tsnb_format {
    TSNB_FORMAT_AUTO = 0, /* sniff the content: '<' starts XML */
    TSNB_FORMAT_XML = 1,  /* physical network */
    TSNB_FORMAT_JSON = 2  /* output-port network */
} tsnb_format;

typedef enum tsnb_method {
    TSNB_METHOD_TFA = 0,
    TSNB_METHOD_SFA = 1
} tsnb_method;

typedef struct tsnb_network tsnb_network;
typedef struct tsnb_results tsnb_results;

/* Analysis option overrides; -1 / NULL keep the network file's setting. */
typedef struct tsnb_options {
    int multiplexing;  /* -1 keep, 0 FIFO, 1 ARBITRARY */
    int input_shaping; /* -1 keep, 0 off, 1 on */
    int packetizer;    /* -1 keep, 0 off, 1 on */
    const char* ceil;  /* NULL keep, "" disable, else a duration like "1ns" */
} tsnb_options;

/* Generator parameters. Quantities are strings such as "10us", "4Mbps" or
 * "50B"; a colon turns one into an inclusive range ("10B:1024B"). capacity
 * may be NULL for unbounded links. */
typedef struct tsnb_gen_params {
    const char* burst;
    const char* arrival_rate;
    const char* max_packet_length;
    const char* latency;
    const char* service_rate;
    const char* capacity;
    uint64_t seed;
} tsnb_gen_params;

const char* tsnb_last_error(void);

tsnb_status tsnb_network_parse(const char* text, tsnb_format format, int lenient,
                               tsnb_network** out);
tsnb_status tsnb_network_load(const char* path, tsnb_format format, int lenient,
                              tsnb_network** out);
/* Writing to the other format converts the network first. */
tsnb_status tsnb_network_write(const tsnb_network* net, tsnb_format format, char** out_text);
void tsnb_network_free(tsnb_network* net);

tsnb_status tsnb_network_name(const tsnb_network* net, char** out_text);
int tsnb_network_server_count(const tsnb_network* net);
int tsnb_network_flow_count(const tsnb_network* net);
/* 1 when the graph induced by flows contains a cycle, 0 otherwise, -1 on error. */
int tsnb_network_is_cyclic(const tsnb_network* net);

tsnb_status tsnb_generate_interleave(int size, const tsnb_gen_params* params, tsnb_network** out);
tsnb_status tsnb_generate_ring(int size, const tsnb_gen_params* params, tsnb_network** out);
tsnb_status tsnb_generate_mesh(int size, const tsnb_gen_params* params, tsnb_network** out);
/* connections_json: JSON object mapping each switch to the array of switches
 * it can route to. */
tsnb_status tsnb_generate_fixed(int num_flows, const char* connections_json,
                                const tsnb_gen_params* params, tsnb_network** out);

/* A result set snapshots the network and accumulates method runs. */
tsnb_status tsnb_results_create(const tsnb_network* net, tsnb_results** out);
tsnb_status tsnb_results_run(tsnb_results* results, tsnb_method method,
                             const tsnb_options* overrides);
tsnb_status tsnb_results_export_json(const tsnb_results* results, char** out_text);
tsnb_status tsnb_results_export_markdown(const tsnb_results* results, char** out_text);
void tsnb_results_free(tsnb_results* results);

/* Bounds in seconds for a method label such as "native_TFA"; negative when
 * the entry does not exist. */
double tsnb_results_flow_delay(const tsnb_results* results, const char* flow, const char* label);
double tsnb_results_server_delay(const tsnb_results* results, const char* server,
                                 const char* label);

void tsnb_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* TSNBOUND_H */
