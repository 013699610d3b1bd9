import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const server = params.get("server") ?? "ws://127.0.0.1:8765";
const hz = Number(params.get("hz") ?? "60");

const app = new App({ serverUrl: server, hz: Number.isFinite(hz) && hz > 0 ? hz : 60 });
app.start();
