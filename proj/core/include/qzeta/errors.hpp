#pragma once

#include <stdexcept>
#include <string>

namespace qzeta {

// Base class for every mathematical error raised by the library.
// Callers that only care about "evaluation failed" can catch this.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The requested evaluation sits on or too close to a pole.
class PoleProximity : public Error {
public:
    using Error::Error;
};

// A Pochhammer denominator (alpha)_l vanished in a beta recurrence.
class PoleAtAlpha : public PoleProximity {
public:
    using PoleProximity::PoleProximity;
};

class PoleAtBeta : public PoleProximity {
public:
    using PoleProximity::PoleProximity;
};

// Gamma-quotient pole (complete beta, digamma, Hurwitz zeta at s=1).
class PoleError : public PoleProximity {
public:
    using PoleProximity::PoleProximity;
};

class PoleAtOne : public PoleError {
public:
    using PoleError::PoleError;
};

// Argument outside the operation's domain of definition.
class DomainError : public Error {
public:
    using Error::Error;
};

// Series does not converge for the given parameters.
class NotConvergent : public DomainError {
public:
    using DomainError::DomainError;
};

// Term or iteration budget exhausted before the tolerance was met.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// A character value table violates one of the character axioms.
class InvalidCharacter : public DomainError {
public:
    using DomainError::DomainError;
};

// Invalid (N, M, n, l0, l1) tuple for the Euler-Maclaurin evaluator.
class ParamError : public DomainError {
public:
    using DomainError::DomainError;
};

// Zero-search failures.
class NoSignChange : public Error {
public:
    using Error::Error;
};

class BracketContainsPole : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

class EnteredZeroFreeRegion : public Error {
public:
    using Error::Error;
};

// Crystal limit requested outside its domain of existence.
class OutsideCrystalDomain : public DomainError {
public:
    using DomainError::DomainError;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace qzeta
