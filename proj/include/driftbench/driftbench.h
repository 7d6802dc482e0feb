#ifndef DRIFTBENCH_H
#define DRIFTBENCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum db_status {
  DB_OK = 0,
  DB_ERR_INVALID = 1,
  DB_ERR_IO = 2,
  DB_ERR_PARSE = 3,
  DB_ERR_CONFIG = 4,
  DB_ERR_RUNTIME = 5
} db_status;

/* Opaque handles. Every function that can fail returns a db_status or NULL;
 * the message for the most recent failure on the calling thread is available
 * from db_last_error(). */
typedef struct db_config db_config;
typedef struct db_episode db_episode;

const char* db_version(void);
const char* db_last_error(void);

/* Configuration: defaults, file loading, and "section.key=value" overrides. */
db_config* db_config_create(void);
db_config* db_config_load(const char* path);
db_status db_config_set(db_config* config, const char* key_value);
void db_config_free(db_config* config);

/* Episode sampling and the text episode format. */
db_episode* db_episode_sample(const db_config* config, uint64_t episode_seed);
db_episode* db_episode_load(const char* path);
db_status db_episode_save(const db_episode* episode, const char* path);
void db_episode_free(db_episode* episode);

int db_episode_envs(const db_episode* episode);
int db_episode_frames_per_env(const db_episode* episode);
int db_episode_dim(const db_episode* episode);
/* Copies frame t (0-based over the whole episode). features must point at
 * db_episode_dim doubles. Any output pointer may be NULL to skip it. */
db_status db_episode_frame(const db_episode* episode, int t, int* env_index, int* class_id,
                           int* labeled, double* features, int features_len);

/* Commands. learner and params_path may be NULL to use the config's learner
 * and the identity embedding; threads <= 0 defers to the config. Gradient-head
 * learners require a pretrained parameter file. */
db_status db_cmd_gen(const db_config* config, const char* out_dir);
db_status db_cmd_pretrain(const db_config* config, const char* out_path);
db_status db_cmd_meta_train(const db_config* config, const char* out_path);
db_status db_cmd_run(const db_config* config, const char* learner, const char* params_path,
                     int threads, const char* out_dir);
db_status db_cmd_plot(const char* const* summary_paths, int count, const char* out_dir);
/* pass_out receives 1 or 0; a failed comparison still returns DB_OK. The
 * one-line verdict is copied into verdict_buf when given. */
db_status db_cmd_compare(const char* summary_a, const char* summary_b, const char* metric,
                         const char* direction, double margin, int* pass_out,
                         char* verdict_buf, size_t verdict_len);

#ifdef __cplusplus
}
#endif

#endif /* DRIFTBENCH_H */
