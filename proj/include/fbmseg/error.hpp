#pragma once

#include <stdexcept>
#include <string>

namespace fbmseg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error { public: using Error::Error; };
class SizeError : public Error { public: using Error::Error; };
class DataError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class FitError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class TrainingError : public Error { public: using Error::Error; };
class SegmentationError : public Error { public: using Error::Error; };

}  // namespace fbmseg
