import pytest

from yangtwist.chain import ChainSpec

# Chains used throughout: the three RTT reference chains and a few mixed-spin ones.
REFERENCE_CHAINS = {
    "half": ChainSpec.build([1], [0], 1),
    "half-one": ChainSpec.build([1, 2], [0, 3], 1),
    "half-one-threehalves": ChainSpec.build([1, 2, 3], [0, 5, 11], 1),
}

MIXED_CHAINS = {
    "half-half": ChainSpec.build([1, 1], [0, 3], 1),
    "one-half": ChainSpec.build([2, 1], ["1/2", "-7/3"], "2/3"),
    "half-half-one": ChainSpec.build([1, 1, 2], [0, "9/2", "-17/3"], 1),
    "threehalves-half-one": ChainSpec.build([3, 1, 2], ["1/3", 5, "-17/2"], "2/3"),
}


@pytest.fixture(params=sorted(REFERENCE_CHAINS))
def reference_chain(request):
    return REFERENCE_CHAINS[request.param]


@pytest.fixture(params=sorted(MIXED_CHAINS))
def mixed_chain(request):
    return MIXED_CHAINS[request.param]
