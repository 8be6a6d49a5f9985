/*
* Copyright (C) 2026 heroin-oc contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heroin_oc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise unusable numeric input.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Grids or trajectories that must line up do not.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration. `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what)
        , field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// RK4 produced NaN/Inf. `step()` is the index of the step that failed.
class IntegrationBlowup : public Error {
public:
    IntegrationBlowup(std::size_t step, const std::string& what)
        : Error(what + " (step " + std::to_string(step) + ")")
        , step_(step)
    {
    }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// A polished polynomial root still has too large a residual.
class RootQualityError : public Error {
public:
    using Error::Error;
};

/// Iterative numeric kernel did not converge.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace heroin_oc
