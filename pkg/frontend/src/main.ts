// Browser entry point: connect to the service, open (or create) a working
// document, and mount the workspace UI.

import { ApiClient } from "./api.js";
import { App } from "./ui.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8787";

async function bootstrap(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const baseUrl = params.get("api") ?? DEFAULT_BASE_URL;
  const api = new ApiClient(baseUrl);

  let documentId = params.get("doc");
  if (!documentId) {
    const docs = await api.listDocuments();
    documentId =
      docs.length > 0 ? docs[0].id : (await api.createDocument("Untitled draft", "")).id;
  }

  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app mount point");
  }
  const app = new App(root, api);
  await app.init(documentId);
}

void bootstrap();
