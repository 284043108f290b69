/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinad {

/// No odd polynomial relation of degree <= max_order annihilates the operator.
class RelationNotFoundError : public std::runtime_error {
public:
    explicit RelationNotFoundError(const std::string& what) : std::runtime_error(what) {}
};

/// The characteristic roots of a relation are repeated, non-negative or not
/// real, so no closed form with distinct real frequencies exists. Carries the
/// offending roots for reporting.
class DegeneracyError : public std::runtime_error {
public:
    DegeneracyError(const std::string& what, std::vector<std::complex<double>> roots)
        : std::runtime_error(what), roots_(std::move(roots)) {}

    const std::vector<std::complex<double>>& roots() const { return roots_; }

private:
    std::vector<std::complex<double>> roots_;
};

} // namespace spinad
