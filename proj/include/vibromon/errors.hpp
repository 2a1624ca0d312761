#pragma once

#include <stdexcept>
#include <string>

namespace vibromon {

// Base for every condition-specific failure raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define VIBROMON_ERROR_TYPE(Name)                                  \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

// signal loading / segmentation
VIBROMON_ERROR_TYPE(MissingFile);
VIBROMON_ERROR_TYPE(MalformedRecord);
VIBROMON_ERROR_TYPE(EmptySignal);
VIBROMON_ERROR_TYPE(SignalTooShort);
VIBROMON_ERROR_TYPE(TooFewSamples);
VIBROMON_ERROR_TYPE(InvalidParameter);

// time-domain features
VIBROMON_ERROR_TYPE(EmptyInput);
VIBROMON_ERROR_TYPE(DegenerateRegression);
VIBROMON_ERROR_TYPE(InvalidK);
VIBROMON_ERROR_TYPE(ZeroVariance);

// cepstral features
VIBROMON_ERROR_TYPE(InvalidLength);
VIBROMON_ERROR_TYPE(FrameTooLong);
VIBROMON_ERROR_TYPE(NegativeFrequency);
VIBROMON_ERROR_TYPE(TooManyFilters);
VIBROMON_ERROR_TYPE(TooManyCoefficients);

// classifiers
VIBROMON_ERROR_TYPE(DimensionMismatch);
VIBROMON_ERROR_TYPE(SingleClassData);
VIBROMON_ERROR_TYPE(MissingClass);
VIBROMON_ERROR_TYPE(TooFewPoints);
VIBROMON_ERROR_TYPE(DegenerateData);
VIBROMON_ERROR_TYPE(EmptyObservation);
VIBROMON_ERROR_TYPE(EmptySequence);
VIBROMON_ERROR_TYPE(TooFewObservations);
VIBROMON_ERROR_TYPE(UnknownClass);
VIBROMON_ERROR_TYPE(InvalidLearningRate);

// pipeline / persistence
VIBROMON_ERROR_TYPE(ClassTooSmall);
VIBROMON_ERROR_TYPE(FeatureSpecMismatch);
VIBROMON_ERROR_TYPE(IoFailure);
VIBROMON_ERROR_TYPE(VersionMismatch);
VIBROMON_ERROR_TYPE(CorruptBundle);

#undef VIBROMON_ERROR_TYPE

}  // namespace vibromon
