/** Browser entry point. The API base defaults to the page origin; pass
 * ?api=http://host:port to point at a service running elsewhere.
 */

import { ApiClient } from "./api.js";
import { boot } from "./app.js";
import { el } from "./dom.js";

const root = document.getElementById("app");
if (root) {
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  boot(root, new ApiClient(base)).catch((error: unknown) => {
    root.append(
      el(
        "p",
        { class: "boot-error" },
        `could not reach the session service: ${error instanceof Error ? error.message : String(error)}`,
      ),
    );
  });
}
