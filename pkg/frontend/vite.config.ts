/// <reference types="vitest/config" />
import { defineConfig } from "vite";

// The dev server proxies API calls to a locally running ranking service.
// Start one with: trendex --data-dir ../data/fixture serve --port 8750
const SERVICE_URL = process.env.TRENDEX_SERVICE_URL ?? "http://127.0.0.1:8750";

const API_PROXY = {
  "/api": SERVICE_URL,
  "/healthz": SERVICE_URL,
};

export default defineConfig({
  server: {
    proxy: API_PROXY,
  },
  preview: {
    proxy: API_PROXY,
  },
  test: {
    environment: "jsdom",
    globalSetup: "./tests/setup-server.ts",
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
