// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include "umdv/context.hpp"
#include "umdv/product.hpp"
#include "umdv/report.hpp"

namespace umdv {

/// Execute the validation workflow for one product: deployment and
/// repository checks, security and operations checks, information model
/// checks, then product specific tests. A critical failure in one block
/// marks every later block NotApplicable. Check failures become FAIL
/// results; configuration and environment errors throw.
ValidationReport run_validation(const ProductSpec& spec, const RunContext& ctx);

}  // namespace umdv
