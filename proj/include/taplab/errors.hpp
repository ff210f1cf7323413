#pragma once

#include <stdexcept>
#include <string>

namespace taplab {

class TaplabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class InvalidArgument : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

// A caller broke an operation's documented precondition or protocol.
class ContractError : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class FeasibilityError : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class RunawayError : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class StallError : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class ObliviousnessViolation : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class VisibilityError : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class InvariantViolation : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class InstanceTooLarge : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class SchedulerUnavailable : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

class IncompleteTrace : public TaplabError {
 public:
  using TaplabError::TaplabError;
};

}  // namespace taplab
