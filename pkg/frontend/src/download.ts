/** File download via a transient object-URL anchor.
 *
 * The last download is also kept in a registry so tests can assert the
 * exact bytes handed to the browser.
 */

export interface Download {
  filename: string;
  text: string;
  type: string;
}

export let lastDownload: Download | null = null;

export function triggerDownload(
  filename: string,
  text: string,
  type = "application/json",
): void {
  lastDownload = { filename, text, type };
  const blob = new Blob([text], { type });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  document.body.appendChild(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
