#pragma once

#include <stdexcept>
#include <string>

namespace obc {

// Every failure carries a stable category slug; the CLI prints it as
// "error:<category>: message" and maps it to an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const { return category_; }

private:
    std::string category_;
};

struct MalformedTagError : Error {
    explicit MalformedTagError(const std::string& m) : Error("malformed-tag", m) {}
};
struct MissingIdError : Error {
    explicit MissingIdError(const std::string& m) : Error("missing-id", m) {}
};
struct InvalidLabelError : Error {
    explicit InvalidLabelError(const std::string& m) : Error("invalid-label", m) {}
};
struct InvalidUtf8Error : Error {
    explicit InvalidUtf8Error(const std::string& m) : Error("invalid-utf8", m) {}
};
struct UnlabeledDocumentError : Error {
    explicit UnlabeledDocumentError(const std::string& m) : Error("unlabeled-document", m) {}
};
struct InvalidParamError : Error {
    explicit InvalidParamError(const std::string& m) : Error("invalid-param", m) {}
};
struct InvalidSpecError : Error {
    explicit InvalidSpecError(const std::string& m) : Error("invalid-spec", m) {}
};
struct SpecMismatchError : Error {
    explicit SpecMismatchError(const std::string& m) : Error("spec-mismatch", m) {}
};
struct EmptyTrainingSetError : Error {
    explicit EmptyTrainingSetError(const std::string& m) : Error("empty-training-set", m) {}
};
struct NonPositiveCError : Error {
    explicit NonPositiveCError(const std::string& m) : Error("non-positive-c", m) {}
};
struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& m) : Error("dimension-mismatch", m) {}
};
struct CorruptModelFileError : Error {
    explicit CorruptModelFileError(const std::string& m) : Error("corrupt-model-file", m) {}
};
struct UnsupportedFormatVersionError : Error {
    explicit UnsupportedFormatVersionError(const std::string& m)
        : Error("unsupported-format-version", m) {}
};
struct TooFewDocumentsError : Error {
    explicit TooFewDocumentsError(const std::string& m) : Error("too-few-documents", m) {}
};
struct InvalidFoldCountError : Error {
    explicit InvalidFoldCountError(const std::string& m) : Error("invalid-fold-count", m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io", m) {}
};

}  // namespace obc
