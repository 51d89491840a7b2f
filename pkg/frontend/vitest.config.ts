import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // The protocol test spawns the real engine server and replays
    // a 50-square session against it, so give it room.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
