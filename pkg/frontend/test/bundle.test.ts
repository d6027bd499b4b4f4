import { build } from "esbuild";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";
import { describe, expect, it } from "vitest";

const here = dirname(fileURLToPath(import.meta.url));

// @vitest-environment node

// The client must never compute verdicts locally: every solved flag and
// feedback string originates from a server response. These fragments would
// only appear if grading logic or feedback templates leaked into the UI.
const GRADING_FINGERPRINTS = [
  "is not satisfying this rule",
  "Mismatch answer",
  "not supposed to be the",
  "consecutive consonants",
  "is not a palindrome",
  "must be exactly",
  "closing bracket without",
  "unfilled cells",
  "coconut trees on them",
  "charAtScore",
  "scoreWord",
  "expectedOrder",
  "floodFill",
  "bracketDepth",
];

describe("client bundle", () => {
  it("contains no grading logic or feedback templates", async () => {
    const result = await build({
      entryPoints: [join(here, "..", "src", "main.ts")],
      bundle: true,
      write: false,
      format: "esm",
    });
    const bundled = result.outputFiles.map((f) => f.text).join("\n");
    for (const fingerprint of GRADING_FINGERPRINTS) {
      expect(bundled).not.toContain(fingerprint);
    }
    // sanity: the bundle does contain the API client
    expect(bundled).toContain("/sessions");
  });
});
