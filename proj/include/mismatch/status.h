#ifndef MISMATCH_STATUS_H
#define MISMATCH_STATUS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mm_status {
  MM_OK = 0,
  MM_ERR_BUDGET_EXCEEDED = 1,
  MM_ERR_PARSE = 2,
  MM_ERR_ROW_NOT_STOCHASTIC = 3,
  MM_ERR_METRIC_ZERO_ON_SUPPORT = 4,
  MM_ERR_NEGATIVE_ENTRY = 5,
  MM_ERR_NONPOSITIVE_TILT = 6,
  MM_ERR_DENOMINATOR_ZERO = 7,
  MM_ERR_IMPOSSIBLE_PAIR = 8,
  MM_ERR_EMPTY_DISTRIBUTION = 9,
  MM_ERR_ORDERING_VIOLATED = 10,
  MM_ERR_DIMENSION_MISMATCH = 11,
  MM_ERR_INVALID_ARGUMENT = 12,
  MM_ERR_IO = 13,
  MM_ERR_INTERNAL = 14
} mm_status;

/* Stable identifier for a status code, e.g. "RowNotStochastic". */
const char* mm_status_name(mm_status s);

#ifdef __cplusplus
}
#endif

#endif
