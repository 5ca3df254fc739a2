#pragma once

#include <stdexcept>
#include <string>

namespace codeperturb {

// Bad input data, bad flags, or a contract the caller violated. Maps to exit
// code 2 on the command line.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system failures. Exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base of everything the completion provider can raise. Exit code 1.
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or rejected credential. Never retried.
class AuthError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// A single request exceeded the configured timeout. Never retried.
class TimeoutError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Retryable failure (5xx, 429, dropped connection). Only surfaces wrapped in
// RetriesExhaustedError once the retry budget is spent.
class TransientError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

class RetriesExhaustedError : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

}  // namespace codeperturb
