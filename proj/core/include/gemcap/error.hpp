#pragma once

#include <stdexcept>
#include <string>

namespace gemcap {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GEMCAP_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                          \
        explicit Name(const std::string& msg) : Error(msg) {}      \
    }

// tensor / layers
GEMCAP_DEFINE_ERROR(InvalidShape);
GEMCAP_DEFINE_ERROR(ShapeMismatch);
GEMCAP_DEFINE_ERROR(InvalidAxis);
GEMCAP_DEFINE_ERROR(VocabOverflow);

// lexicon / grammar
GEMCAP_DEFINE_ERROR(LexiconMiss);
GEMCAP_DEFINE_ERROR(LexiconConflict);
GEMCAP_DEFINE_ERROR(LexiconParseError);
GEMCAP_DEFINE_ERROR(IncompleteRecord);
GEMCAP_DEFINE_ERROR(GrammarError);

// dataset
GEMCAP_DEFINE_ERROR(ManifestParseError);
GEMCAP_DEFINE_ERROR(StratificationError);
GEMCAP_DEFINE_ERROR(DatasetError);
GEMCAP_DEFINE_ERROR(ImageIoError);

// training / model
GEMCAP_DEFINE_ERROR(TrainingDiverged);
GEMCAP_DEFINE_ERROR(TaskMismatch);
GEMCAP_DEFINE_ERROR(CheckpointFormatError);
GEMCAP_DEFINE_ERROR(CheckpointCorrupt);

// evaluation
GEMCAP_DEFINE_ERROR(InputMismatch);
GEMCAP_DEFINE_ERROR(EmptyEvaluation);
GEMCAP_DEFINE_ERROR(ClassError);

#undef GEMCAP_DEFINE_ERROR

} // namespace gemcap
