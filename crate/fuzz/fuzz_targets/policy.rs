#![no_main]

use herdq::sim::QuarantinePolicy;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(policy) = text.parse::<QuarantinePolicy>() else {
        return;
    };
    policy.validate().expect("parsed policy is valid");
    let back: QuarantinePolicy = policy.to_string().parse().expect("display form parses");
    assert_eq!(back, policy);
});
