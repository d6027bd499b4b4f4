import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8787";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
const app = mountApp(root, new ApiClient(baseUrl));

const game = params.get("game") ?? undefined;
const difficulty = params.get("difficulty") ?? undefined;
void app.startSession({ game, difficulty });
