import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // parity tests shell out to the CLI many times
    testTimeout: 120_000,
  },
});
