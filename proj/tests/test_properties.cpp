#include <gtest/gtest.h>

#include "support/properties.hpp"

#define PROPERTY(Name, fn)                                            \
  TEST(Properties, Name) {                                            \
    auto r = props::fn();                                             \
    EXPECT_GT(r.checks, 0u);                                          \
    EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;  \
  }

PROPERTY(FactorialityExtendability, factoriality_extendability)
PROPERTY(PhiHatAdditivity, phi_hat_additivity)
PROPERTY(Submultiplicativity, submultiplicativity)
PROPERTY(BinomialEntropy, binomial_entropy)
PROPERTY(QftPersistence, qft_persistence)
PROPERTY(CgcOutputs, cgc_outputs)
PROPERTY(UdUniqueFactorisation, ud_unique_factorisation)
