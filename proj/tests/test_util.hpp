#pragma once

#include <gtest/gtest.h>

#include "tornmend/error.hpp"

// Passes iff `expr` throws tornmend::Error carrying `code`.
#define EXPECT_ERROR_CODE(expr, error_code)                                                       \
  do {                                                                                            \
    try {                                                                                         \
      (void)(expr);                                                                               \
      ADD_FAILURE() << "expected " << tornmend::to_string(error_code) << " from " #expr;          \
    } catch (const tornmend::Error& e) {                                                          \
      EXPECT_EQ(e.code(), error_code) << e.what();                                                \
    }                                                                                             \
  } while (0)
