import assert from "node:assert/strict";
import { test } from "node:test";

import { OtherTagCounter, mapTagToRole } from "./roles.js";

test("core mappings", () => {
    assert.equal(mapTagToRole("V"), "verb");
    assert.equal(mapTagToRole("ARGM-LOC"), "location");
    assert.equal(mapTagToRole("ARGM-TMP"), "temporal");
    for (let i = 0; i <= 5; i++) {
        assert.equal(mapTagToRole(`ARG${i}`), "argument");
    }
    assert.equal(mapTagToRole("R-ARG0"), "argument");
    assert.equal(mapTagToRole("C-ARG1"), "argument");
});

test("modifiers and unknown tags fall through to other", () => {
    for (const tag of ["ARGM-ADV", "ARGM-MNR", "ARGM-DIS", "ARGM-NEG",
                       "ARGM-MOD", "ARGM-DIR", "ARGM-PRP", "SOMETHING-NEW"]) {
        assert.equal(mapTagToRole(tag), "other");
    }
});

test("mapping is total over arbitrary strings", () => {
    const roles = new Set(["verb", "argument", "location", "temporal", "other"]);
    for (const tag of ["", "X", "ARG9", "argm-loc", "V2", "ARGM-", "R-ARG7"]) {
        assert.ok(roles.has(mapTagToRole(tag)), tag);
    }
});

test("other-tag counter aggregates", () => {
    const counter = new OtherTagCounter();
    counter.record("ARGM-ADV");
    counter.record("ARGM-ADV");
    counter.record("ARGM-NEG");
    assert.deepEqual(counter.summary(), ["ARGM-ADV: 2", "ARGM-NEG: 1"]);
});
